#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/quadrature.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

constexpr double kE1SeriesSwitch = 1.5;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << what << " requires a finite positive argument, got " << x;
    fail(ErrorCode::domain, os.str());
  }
}

// -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
double e1_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(x) + sum;
}

// e^x E1(x) by the modified Lentz continued fraction.
double e1_scaled_cf(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h;
  }
  fail(ErrorCode::convergence, "E1 continued fraction did not converge");
}

}  // namespace

double exp_integral_e1(double x) {
  require_positive(x, "exp_integral_e1");
  if (x < kE1SeriesSwitch) return e1_series(x);
  return e1_scaled_cf(x) * std::exp(-x);
}

double exp_integral_e1_scaled(double x) {
  require_positive(x, "exp_integral_e1_scaled");
  if (x < kE1SeriesSwitch) return std::exp(x) * e1_series(x);
  return e1_scaled_cf(x);
}

double meijer_g_special(double x) {
  require_positive(x, "meijer_g_special");
  auto head = [x](double y) { return y == 0.0 ? 1.0 : std::exp(-x * y) * std::log1p(y) / y; };
  std::array<double, 5> pts{};
  std::size_t n = 0;
  pts[n++] = 0.0;
  for (double k : {1.0, 10.0, 40.0}) {
    if (k / x < 1.0) pts[n++] = k / x;
  }
  pts[n++] = 1.0;
  const double near = integrate(head, std::span<const double>(pts.data(), n), 1e-14).value;

  // Tail y in [1, inf) mapped through y = e^u - 1; cut at the first Y whose
  // analytic bound log(1+Y)/Y * e^{-xY}/x is below double resolution.
  double Y = std::max(2.0, 40.0 / x);
  while (std::log1p(Y) / Y * std::exp(-x * Y) / x > 1e-18 * near) Y *= 1.5;
  auto tail = [x](double u) {
    const double y = std::expm1(u);
    return std::exp(-x * y) * u / y * (y + 1.0);
  };
  const double u_max = std::log1p(Y);
  const double u_mid = std::min(u_max, std::log1p(std::max(2.0, 1.0 / x)));
  const double far = integrate(tail, {std::numbers::ln2, u_mid, u_max}, 1e-14).value;
  return near + far;
}

double lower_bound_l(double x) {
  require_positive(x, "lower_bound_l");
  return exp_integral_e1_scaled(x) - 1.0 + x * meijer_g_special(x);
}

double speed_density(double x, const ModelParams& params) {
  if (!(x > 0.0)) return 0.0;
  const double u = params.whittaker_arg(x);
  if (u > 1400.0) return 0.0;  // u / x would overflow long before e^{-u} stops underflowing
  return u / x * std::exp(-u);
}

double stationary_cdf(double x, const ModelParams& params) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-params.whittaker_arg(x));
}

}  // namespace qsdsr
