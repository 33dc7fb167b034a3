#include "qsdsr/qsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/quadrature.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

// e^{z/2} W_{a,xi/2}(z)
double scaled_w(int a, const SpectralIndex& se, double z) {
  return detail::whittaker_w_general(a, se.half_xi(), z, true);
}

constexpr int kModeScanNodes = 256;
constexpr int kModeScanCap = 8192;

}  // namespace

QsdSolution::QsdSolution(const ModelParams& params, const EigenResult& eigen)
    : params_(params), eigen_(eigen), se_(SpectralIndex::from_lambda(eigen.lambda, params)) {
  const double zA = params_.whittaker_arg(params_.A());
  const double ws = scaled_w(0, se_, zA);
  if (!(ws > 0.0)) {
    std::ostringstream os;
    os << "normalization denominator is not positive (scaled W_0 = " << ws << ")";
    fail(ErrorCode::domain, os.str());
  }
  // e^{-zA/2} W_0(zA) = e^{-zA} * scaled
  log_denom_ = std::log(ws) - zA;
  denom_ = std::exp(log_denom_);
}

double QsdSolution::pdf(double x) const {
  if (!(x > 0.0) || x >= params_.A()) return 0.0;
  const double z = params_.whittaker_arg(x);
  if (z > 1400.0) return 0.0;
  return std::exp(-z - log_denom_) * scaled_w(1, se_, z) / x;
}

double QsdSolution::log_pdf(double x) const {
  if (!(x > 0.0) || x >= params_.A()) return -std::numeric_limits<double>::infinity();
  const double z = params_.whittaker_arg(x);
  return std::log(scaled_w(1, se_, z)) - z - log_denom_ - std::log(x);
}

double QsdSolution::pdf_derivative(double x) const {
  if (!(x > 0.0) || x > params_.A()) return 0.0;
  const double z = params_.whittaker_arg(x);
  if (z > 1400.0) return 0.0;
  return std::exp(-z - log_denom_) * scaled_w(2, se_, z) / (x * x);
}

double QsdSolution::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= params_.A()) return 1.0;
  const double z = params_.whittaker_arg(x);
  if (z > 1400.0) return 0.0;
  return std::exp(-z - log_denom_) * scaled_w(0, se_, z);
}

QsdSolution build_solution(const ModelParams& params, const EigenOptions& options) {
  return QsdSolution(params, dominant_eigenvalue(params, options));
}

MomentSeries moments(const QsdSolution& sol, int n_max) {
  if (n_max < 0) fail(ErrorCode::invalid_argument, "moment order must be nonnegative");
  if (n_max > kMaxMomentOrder) {
    std::ostringstream os;
    os << "moment order " << n_max << " exceeds the supported maximum " << kMaxMomentOrder;
    fail(ErrorCode::overflow, os.str());
  }
  const double mu2 = sol.params().mu2();
  const double A = sol.params().A();
  const double lambda = sol.lambda();
  MomentSeries out;
  out.moments.reserve(n_max + 1);
  out.moments.push_back(1.0);
  double a_pow = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    a_pow *= A;
    const double m = (-lambda * a_pow - n * out.moments.back()) / (mu2 * n * (n - 1) / 2.0 - lambda);
    if (!std::isfinite(m)) {
      std::ostringstream os;
      os << "moment M_" << n << " overflowed";
      fail(ErrorCode::overflow, os.str());
    }
    out.moments.push_back(m);
  }
  return out;
}

double mean_closed_form(const QsdSolution& sol) { return sol.params().A() + 1.0 / sol.lambda(); }

double variance_closed_form(const QsdSolution& sol) {
  const double mu2 = sol.params().mu2();
  const double lambda = sol.lambda();
  const double m1 = mean_closed_form(sol);
  return -(mu2 * m1 * m1 + 1.0 / lambda) / (mu2 - lambda);
}

double mode(const QsdSolution& sol) {
  const double A = sol.params().A();
  auto sign_at = [&](double x) { return scaled_w(2, sol.index(), sol.params().whittaker_arg(x)); };
  for (int nodes = kModeScanNodes; nodes <= kModeScanCap; nodes *= 2) {
    // Graded nodes A (i/n)^2 so that the first one sits below the mode even for large A.
    double left = A / (double(nodes) * nodes);
    double g_left = sign_at(left);
    for (int i = 2; i <= nodes; ++i) {
      double right = A * (double(i) * i) / (double(nodes) * nodes);
      const double g_right = sign_at(right);
      if (g_left > 0.0 && g_right <= 0.0) {
        if (g_right == 0.0) return right;
        while (right - left > 4.0 * std::numeric_limits<double>::epsilon() * right) {
          const double mid = 0.5 * (left + right);
          (sign_at(mid) > 0.0 ? left : right) = mid;
        }
        return 0.5 * (left + right);
      }
      left = right;
      g_left = g_right;
    }
  }
  fail(ErrorCode::convergence, "no sign change of q' found on the mode scan grid");
}

double boundary_flux_identity(const QsdSolution& sol) {
  const double A = sol.params().A();
  const double h = 1e-5 * A;
  // q(A) = 0 by construction; backward stencil for f'(A).
  const double d = (-18.0 * sol.pdf(A - h) + 9.0 * sol.pdf(A - 2.0 * h) - 2.0 * sol.pdf(A - 3.0 * h)) / (6.0 * h);
  return A * A * sol.params().mu2() / 2.0 * d;
}

std::vector<double> quadrature_breakpoints(const QsdSolution& sol) {
  const double A = sol.params().A();
  const double peak = 1.0 / sol.params().mu2();
  std::vector<double> pts{0.0, A};
  for (int k = 1; k < 16; ++k) pts.push_back(A * k / 16.0);
  for (double f : {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    if (f * peak < A) pts.push_back(f * peak);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double moment_quadrature(const QsdSolution& sol, int n, double rel_tol) {
  const auto pts = quadrature_breakpoints(sol);
  auto f = [&](double x) { return std::pow(x, n) * sol.pdf(x); };
  return integrate(f, std::span<const double>(pts), rel_tol).value;
}

}  // namespace qsdsr
