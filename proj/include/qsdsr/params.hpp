#pragma once

#include <complex>

namespace qsdsr {

/// Post-change drift and detection threshold of the killed GSR diffusion
/// dR = dt + mu R dB, stopped at the first hit of A.
class ModelParams {
 public:
  /// Throws Error(invalid_argument) unless mu != 0 and A > 0, both finite.
  ModelParams(double mu, double A);

  double mu() const noexcept { return mu_; }
  double A() const noexcept { return A_; }
  /// Every formula depends on mu only through this product.
  double mu2() const noexcept { return mu_ * mu_; }
  /// Whittaker argument 2/(mu^2 x) corresponding to the state x.
  double whittaker_arg(double x) const noexcept { return 2.0 / (mu2() * x); }

 private:
  double mu_;
  double A_;
};

/// An eigenvalue together with xi = sqrt(1 + 8 lambda / mu^2). For lambda <= 0
/// xi is either real in [0, 1] or purely imaginary.
struct SpectralIndex {
  double lambda = 0.0;
  double xi_squared = 1.0;
  std::complex<double> xi{1.0, 0.0};

  static SpectralIndex from_lambda(double lambda, const ModelParams& params);
  /// Second Whittaker index xi/2.
  std::complex<double> half_xi() const noexcept { return 0.5 * xi; }
  bool xi_is_real() const noexcept { return xi_squared >= 0.0; }
};

/// lambda(xi) = mu^2 (xi^2 - 1) / 8.
double lambda_from_xi_squared(double xi_squared, const ModelParams& params) noexcept;

}  // namespace qsdsr
