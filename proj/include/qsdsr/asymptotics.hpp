#pragma once

#include "qsdsr/params.hpp"

namespace qsdsr {

/// Coefficients of lambda^2 and lambda^3 in the large-A expansion of
/// W_{1,xi/2}(u), evaluated at u:
///   c2 = (2/mu^2) L(u),  c3 = (2/mu^2)^2 [G(u) - 2 L(u)].
struct ExpansionCoefficients {
  double c2 = 0.0;
  double c3 = 0.0;
};

ExpansionCoefficients expansion_coefficients(double u, const ModelParams& params);

/// -1/A.
double lambda_order1(const ModelParams& params);

/// Root closest to zero of (2/mu^2) L(u_A) lambda^2 + lambda + 1/A = 0,
/// u_A = 2/(mu^2 A). Throws Error(threshold_too_small) if the roots are complex.
double lambda_order2(const ModelParams& params);

/// The single real root of 1/A + lambda + c2 lambda^2 + c3 lambda^3 = 0 at
/// u_A, from Cardano's formula followed by Newton polishing. Throws
/// Error(threshold_too_small) when the cubic has three real roots. c3 is
/// positive for every threshold of practical size.
double lambda_order3(const ModelParams& params);

/// Dispatch on order 1, 2 or 3.
double lambda_approx(int order, const ModelParams& params);

/// (2/mu^2) e^{-1/(mu^2 x)} {1/x + lambda + c2(u) lambda^2 + c3(u) lambda^3}, u = 2/(mu^2 x):
/// the third-order approximation of W_{1,xi(lambda)/2}(u).
double whittaker_expansion3(double x, double lambda, const ModelParams& params);

/// Closed forms for d^k/db^k W_{1,b}(x) at b = 1/2, k = 1, 2, 3:
///   e^{-x/2},  2 e^{-x/2} (e^x E1(x) + x G(x)),  6 e^{-x/2} G(x).
double index_derivative_identity(int k, double x);

/// The same derivatives by central differences in b along the real axis,
/// with steps h, h/2, h/4 combined by Richardson extrapolation.
double index_derivative_numeric(int k, double x, double h = 1e-2);

/// Order-K approximate eigenvalue and quasi-stationary pdf.
class ApproxSolution {
 public:
  /// Throws Error(threshold_too_small) if lambda of this order does not exist.
  ApproxSolution(int order, const ModelParams& params);

  int order() const noexcept { return order_; }
  double lambda_approx() const noexcept { return lambda_; }
  const ModelParams& params() const noexcept { return params_; }
  /// e^{-1/(mu^2 A)} W_{0,xi(lambda_K)/2}(2/(mu^2 A)).
  double denom() const noexcept { return denom_; }

  /// Truncated order-K numerator over denom; 0 outside (0, A].
  double pdf(double x) const;

 private:
  int order_;
  ModelParams params_;
  double lambda_;
  double denom_;
};

/// pdf of the order-K approximation at x.
double pdf_approx(int order, double x, const ModelParams& params);

/// Smallest A in [A_lo, A_hi] (to relative tolerance rel_tol) above which the
/// order-K eigenvalue approximation exists, found by bisection on the
/// existence predicate. Returns A_lo if it already exists there; throws
/// Error(threshold_too_small) if it does not exist at A_hi.
double existence_threshold(int order, double mu, double A_lo = 1e-3, double A_hi = 1e6, double rel_tol = 1e-10);

}  // namespace qsdsr
