#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qsdsr {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

using GK21 = boost::math::quadrature::gauss_kronrod<double, 21>;

template <class F>
QuadratureResult gk_adaptive(F& f, double a, double b, double abs_tol, double rel_tol, unsigned depth) {
  QuadratureResult r;
  r.value = GK21::integrate(f, a, b, 0, 0.0, &r.error);
  // Boost reports the non-adaptive error on the reference interval [-1, 1].
  r.error *= 0.5 * (b - a);
  if (depth == 0 || r.error <= std::max(abs_tol, rel_tol * std::abs(r.value))) return r;
  const double mid = 0.5 * (a + b);
  if (!(mid > a && mid < b)) return r;
  const QuadratureResult left = gk_adaptive(f, a, mid, abs_tol / 2.0, rel_tol, depth - 1);
  const QuadratureResult right = gk_adaptive(f, mid, b, abs_tol / 2.0, rel_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod over consecutive breakpoints. A piece is
/// accepted once its error estimate is below rel_tol times its own value or
/// rel_tol times the L1 norm of the whole integral (from a coarse first pass),
/// so pieces carrying negligible mass are not refined into round-off.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints, double rel_tol = 1e-12,
                           unsigned max_depth = 30) {
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    double err = 0.0;
    double piece_l1 = 0.0;
    detail::GK21::integrate(f, breakpoints[i], breakpoints[i + 1], 0, 0.0, &err, &piece_l1);
    l1 += piece_l1;
  }
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    const QuadratureResult r = detail::gk_adaptive(f, a, b, 1e-2 * rel_tol * l1, rel_tol, max_depth);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

template <class F>
QuadratureResult integrate(F&& f, std::initializer_list<double> breakpoints, double rel_tol = 1e-12,
                           unsigned max_depth = 30) {
  std::vector<double> pts(breakpoints);
  return integrate(std::forward<F>(f), std::span<const double>(pts), rel_tol, max_depth);
}

}  // namespace qsdsr
