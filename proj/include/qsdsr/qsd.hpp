#pragma once

#include <vector>

#include "qsdsr/eigensolver.hpp"
#include "qsdsr/params.hpp"

namespace qsdsr {

/// Exact quasi-stationary law for one (mu, A). Immutable after construction.
class QsdSolution {
 public:
  QsdSolution(const ModelParams& params, const EigenResult& eigen);

  const ModelParams& params() const noexcept { return params_; }
  const SpectralIndex& index() const noexcept { return se_; }
  const EigenResult& eigen() const noexcept { return eigen_; }
  double lambda() const noexcept { return se_.lambda; }
  /// e^{-1/(mu^2 A)} W_{0,xi/2}(2/(mu^2 A)).
  double denom() const noexcept { return denom_; }

  /// q_A(x); 0 outside (0, A).
  double pdf(double x) const;
  /// log q_A(x) for 0 < x < A, computed without underflow; -inf elsewhere.
  double log_pdf(double x) const;
  /// Exact derivative q_A'(x) = e^{-1/(mu^2 x)} W_{2,xi/2}(2/(mu^2 x)) / (x^2 denom) on (0, A].
  double pdf_derivative(double x) const;
  /// Q_A(x): 0 for x <= 0, 1 for x >= A.
  double cdf(double x) const;

 private:
  ModelParams params_;
  EigenResult eigen_;
  SpectralIndex se_;
  double denom_;
  double log_denom_;
};

QsdSolution build_solution(const ModelParams& params, const EigenOptions& options = {});

/// Moments M_0..M_n of the quasi-stationary law.
struct MomentSeries {
  std::vector<double> moments;
};

inline constexpr int kMaxMomentOrder = 50;

/// Forward recursion M_n = (-lambda A^n - n M_{n-1}) / (mu^2 n (n-1)/2 - lambda).
/// Throws Error(overflow) for n_max > kMaxMomentOrder or a non-finite moment.
MomentSeries moments(const QsdSolution& sol, int n_max);

/// A + 1/lambda.
double mean_closed_form(const QsdSolution& sol);
/// -(mu^2 (A + 1/lambda)^2 + 1/lambda) / (mu^2 - lambda).
double variance_closed_form(const QsdSolution& sol);

/// The unique interior zero of q', located as the sign change of
/// x -> W_{2,xi/2}(2/(mu^2 x)) and refined by bisection.
double mode(const QsdSolution& sol);

/// A^2 (mu^2/2) q'(A) from a one-sided 4-point difference with h = 1e-5 A.
double boundary_flux_identity(const QsdSolution& sol);

/// Breakpoints for adaptive quadrature over [0, A], graded toward 0 and
/// clustered around the bulk of the law.
std::vector<double> quadrature_breakpoints(const QsdSolution& sol);

/// int_0^A x^n q_A(x) dx by adaptive Gauss-Kronrod.
double moment_quadrature(const QsdSolution& sol, int n, double rel_tol = 1e-12);

}  // namespace qsdsr
