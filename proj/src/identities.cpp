#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsdsr/eigensolver.hpp"
#include "qsdsr/error.hpp"
#include "qsdsr/oracle.hpp"
#include "qsdsr/quadrature.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

// Central difference with one Richardson pass.
template <class F>
double derivative(F&& f, double x0, double h) {
  const double d1 = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
  const double d2 = (f(x0 + h / 2.0) - f(x0 - h / 2.0)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

double integral_identity_check(std::complex<double> b, double z) {
  if (!(z > 0.0)) fail(ErrorCode::domain, "integral identity requires z > 0");
  const WhittakerIndex w1 = WhittakerIndex::make(1, b);
  const WhittakerIndex w0 = WhittakerIndex::make(0, b);
  // In t = z x the integrand is e^{-t} (e^{t/2} W(t)) / t; beyond t = 800 it underflows.
  auto f = [&](double t) { return std::exp(-t) * whittaker_w_scaled(w1, t) / t; };
  std::vector<double> pts{z};
  for (double d : {0.5, 2.0, 6.0, 15.0, 40.0, 100.0, 300.0}) pts.push_back(z + d);
  pts.push_back(std::max(800.0, z + 800.0));
  const double lhs = integrate(f, std::span<const double>(pts), 1e-13).value;
  const double rhs = std::exp(-z / 2.0) * whittaker_w(w0, z);
  return std::abs(lhs - rhs);
}

NormIdentity norm_identity_check(const ModelParams& params, const SpectralIndex& se, double rel_step) {
  if (!(rel_step > 0.0)) fail(ErrorCode::invalid_argument, "difference step must be positive");
  const double A = params.A();
  const double uA = params.whittaker_arg(A);
  NormIdentity out;

  auto integrand = [&](double x) {
    const double z = params.whittaker_arg(x);
    if (z > 1400.0) return 0.0;
    const double phi = eigenfunction(x, se, params);
    return 2.0 / (params.mu2() * x * x) * std::exp(-z) * phi * phi;
  };
  std::vector<double> pts{0.0, A};
  for (int k = 1; k < 16; ++k) pts.push_back(A * k / 16.0);
  for (double f : {0.1, 0.3, 1.0, 3.0}) {
    if (f / params.mu2() < A) pts.push_back(f / params.mu2());
  }
  std::sort(pts.begin(), pts.end());
  out.norm_squared = integrate(integrand, std::span<const double>(pts), 1e-12).value;

  auto w_of_lambda = [&](double lambda) {
    return detail::whittaker_w_general(1, SpectralIndex::from_lambda(lambda, params).half_xi(), uA);
  };
  auto w_of_u = [&](double u) { return detail::whittaker_w_general(1, se.half_xi(), u); };
  const double h_lambda = rel_step * std::max(std::abs(se.lambda), 1e-8);
  out.d_lambda = derivative(w_of_lambda, se.lambda, std::min(h_lambda, 0.5 * std::abs(se.lambda)));
  out.d_u = derivative(w_of_u, uA, rel_step * uA);
  out.product = params.mu2() / 2.0 * out.d_lambda * out.d_u;
  out.relative_residual = std::abs(out.norm_squared - out.product) / std::abs(out.norm_squared);
  return out;
}

}  // namespace qsdsr
