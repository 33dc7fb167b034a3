#include "qsdsr/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

void require_order(int order) {
  if (order < 1 || order > 3) {
    std::ostringstream os;
    os << "approximation order must be 1, 2 or 3, got " << order;
    fail(ErrorCode::invalid_argument, os.str());
  }
}

double cubic(const ExpansionCoefficients& c, double inv_A, double lambda) {
  return ((c.c3 * lambda + c.c2) * lambda + 1.0) * lambda + inv_A;
}

// Central difference for the k-th derivative of f at 0 with step h.
template <class F>
double central_difference(int k, F&& f, double h) {
  switch (k) {
    case 1: return (f(h) - f(-h)) / (2.0 * h);
    case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    default: return (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
  }
}

}  // namespace

ExpansionCoefficients expansion_coefficients(double u, const ModelParams& params) {
  const double s = 2.0 / params.mu2();
  const double L = lower_bound_l(u);
  return {s * L, s * s * (meijer_g_special(u) - 2.0 * L)};
}

double lambda_order1(const ModelParams& params) { return -1.0 / params.A(); }

double lambda_order2(const ModelParams& params) {
  const double A = params.A();
  const double L = lower_bound_l(params.whittaker_arg(A));
  const double disc = 1.0 - 8.0 / (params.mu2() * A) * L;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "second-order eigenvalue approximation has no real root at A = " << A << " (discriminant " << disc
       << ")";
    fail(ErrorCode::threshold_too_small, os.str());
  }
  // -(mu^2/4)(1 - sqrt(disc))/L, rationalized to avoid cancellation.
  return -2.0 / (A * (1.0 + std::sqrt(disc)));
}

double lambda_order3(const ModelParams& params) {
  const double A = params.A();
  const ExpansionCoefficients c = expansion_coefficients(params.whittaker_arg(A), params);
  if (c.c3 == 0.0) {
    std::ostringstream os;
    os << "third-order eigenvalue equation degenerates (zero cubic coefficient) at A = " << A;
    fail(ErrorCode::threshold_too_small, os.str());
  }
  const double p = c.c2 / c.c3;
  const double q = 1.0 / c.c3;
  const double r = 1.0 / (A * c.c3);
  // Depressed cubic t^3 + P t + Q with lambda = t - p/3.
  const double P = q - p * p / 3.0;
  const double Q = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
  const double disc = Q * Q / 4.0 + P * P * P / 27.0;
  if (!(disc > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "third-order eigenvalue equation has three real roots at A = " << A << " (c2 = " << c.c2
       << ", c3 = " << c.c3 << ", discriminant " << disc << ")";
    fail(ErrorCode::threshold_too_small, os.str());
  }
  const double big = std::cbrt(-Q / 2.0 - std::copysign(std::sqrt(disc), Q));
  double lambda = (big == 0.0 ? 0.0 : big - P / (3.0 * big)) - p / 3.0;

  const double inv_A = 1.0 / A;
  for (int it = 0; it < 8; ++it) {
    const double f = cubic(c, inv_A, lambda);
    const double df = (3.0 * c.c3 * lambda + 2.0 * c.c2) * lambda + 1.0;
    const double step = f / df;
    lambda -= step;
    if (std::abs(step) <= 1e-16 * std::abs(lambda)) break;
  }
  return lambda;
}

double lambda_approx(int order, const ModelParams& params) {
  require_order(order);
  switch (order) {
    case 1: return lambda_order1(params);
    case 2: return lambda_order2(params);
    default: return lambda_order3(params);
  }
}

double whittaker_expansion3(double x, double lambda, const ModelParams& params) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "expansion requires x > 0, got " << x;
    fail(ErrorCode::domain, os.str());
  }
  const double u = params.whittaker_arg(x);
  const ExpansionCoefficients c = expansion_coefficients(u, params);
  const double poly = 1.0 / x + lambda + c.c2 * lambda * lambda + c.c3 * lambda * lambda * lambda;
  return 2.0 / params.mu2() * std::exp(-u / 2.0) * poly;
}

double index_derivative_identity(int k, double x) {
  require_order(k);
  if (!(x > 0.0)) fail(ErrorCode::domain, "index derivative identity requires x > 0");
  const double e = std::exp(-x / 2.0);
  switch (k) {
    case 1: return e;
    case 2: return 2.0 * e * (exp_integral_e1_scaled(x) + x * meijer_g_special(x));
    default: return 6.0 * e * meijer_g_special(x);
  }
}

double index_derivative_numeric(int k, double x, double h) {
  require_order(k);
  if (!(x > 0.0)) fail(ErrorCode::domain, "index derivative requires x > 0");
  auto f = [x](double db) { return detail::whittaker_w_general(1, {0.5 + db, 0.0}, x); };
  // Each formula has error c2 h^2 + c4 h^4 + ...; two Richardson passes.
  const double d1 = central_difference(k, f, h);
  const double d2 = central_difference(k, f, h / 2.0);
  const double d3 = central_difference(k, f, h / 4.0);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

ApproxSolution::ApproxSolution(int order, const ModelParams& params)
    : order_(order), params_(params), lambda_(qsdsr::lambda_approx(order, params)) {
  const SpectralIndex se = SpectralIndex::from_lambda(lambda_, params_);
  const double zA = params_.whittaker_arg(params_.A());
  denom_ = std::exp(-zA / 2.0) * detail::whittaker_w_general(0, se.half_xi(), zA);
}

double ApproxSolution::pdf(double x) const {
  if (!(x > 0.0) || x > params_.A()) return 0.0;
  const double u = params_.whittaker_arg(x);
  if (u > 1400.0) return 0.0;
  double poly = 1.0 / x + lambda_;
  if (order_ >= 2) {
    const ExpansionCoefficients c = expansion_coefficients(u, params_);
    poly += c.c2 * lambda_ * lambda_;
    if (order_ == 3) poly += c.c3 * lambda_ * lambda_ * lambda_;
  }
  return u * std::exp(-u) * poly / denom_;
}

double pdf_approx(int order, double x, const ModelParams& params) { return ApproxSolution(order, params).pdf(x); }

double existence_threshold(int order, double mu, double A_lo, double A_hi, double rel_tol) {
  require_order(order);
  if (!(A_lo > 0.0) || !(A_hi > A_lo)) fail(ErrorCode::invalid_argument, "need 0 < A_lo < A_hi");
  auto exists = [&](double A) {
    try {
      lambda_approx(order, ModelParams(mu, A));
      return true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::threshold_too_small) throw;
      return false;
    }
  };
  if (exists(A_lo)) return A_lo;
  if (!exists(A_hi)) {
    std::ostringstream os;
    os << "order-" << order << " eigenvalue approximation does not exist up to A = " << A_hi;
    fail(ErrorCode::threshold_too_small, os.str());
  }
  double lo = A_lo;
  double hi = A_hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    (exists(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace qsdsr
