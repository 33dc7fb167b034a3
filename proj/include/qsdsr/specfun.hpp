#pragma once

#include <complex>

#include "qsdsr/params.hpp"

namespace qsdsr {

/// Gamma function for complex arguments (Lanczos, reflection for Re z < 1/2).
/// Throws Error(domain) at the poles z = 0, -1, -2, ...
std::complex<double> gamma_cx(std::complex<double> z);

/// 1/Gamma(z); entire, so it returns 0 at the poles instead of throwing.
std::complex<double> rgamma_cx(std::complex<double> z);

/// Indices (a, b) of W_{a,b}. The first index is restricted to {0, 1, 2}; the
/// second is real in [0, 1/2] or purely imaginary. Use make() to validate.
struct WhittakerIndex {
  int a = 1;
  std::complex<double> b{0.5, 0.0};

  static WhittakerIndex make(int a, std::complex<double> b);
};

/// Whittaker W_{a,b}(z) for z > 0.
///
/// Three evaluation routes are used:
///   - z <= kSeriesSwitch: the connection formula through the two Kummer
///     series solutions M_{a,+b}, M_{a,-b};
///   - z >= kAsymptoticSwitch: the large-z asymptotic series, truncated at its
///     smallest term;
///   - in between, and whenever b is close to the connection formula's gamma
///     poles (b near 0 or 1/2), the ODE is continued inward from the
///     asymptotic region with high-order Taylor steps.
/// b = 1/2 is evaluated from the elementary closed forms.
double whittaker_w(const WhittakerIndex& idx, double z);

/// e^{z/2} W_{a,b}(z); finite where W itself underflows (large z).
double whittaker_w_scaled(const WhittakerIndex& idx, double z);

inline constexpr double kSeriesSwitch = 2.0;
inline constexpr double kAsymptoticSwitch = 40.0;

namespace detail {

enum class WhittakerRoute { automatic, connection, ode, asymptotic };

/// Unvalidated evaluator: any integer a, b real (any sign) or purely
/// imaginary. Used for index differentiation and branch cross-checks.
double whittaker_w_general(int a, std::complex<double> b, double z, bool scaled = false,
                           WhittakerRoute route = WhittakerRoute::automatic);

/// Kummer 1F1(alpha; beta; z) with compensated summation.
std::complex<double> kummer_m(std::complex<double> alpha, std::complex<double> beta, double z);

}  // namespace detail

/// E1(x) = int_x^inf e^{-y}/y dy, x > 0.
double exp_integral_e1(double x);

/// e^x E1(x), x > 0, without overflow for large x.
double exp_integral_e1_scaled(double x);

/// G(x) = int_0^inf e^{-xy} log(1+y) / y dy, x > 0; the Meijer G^{3,1}_{2,3}
/// special case with parameters (0,1; 0,0,0).
double meijer_g_special(double x);

/// L(x) = e^x E1(x) - 1 + x G(x).
double lower_bound_l(double x);

/// Speed measure / stationary density m(x) = 2/(mu^2 x^2) e^{-2/(mu^2 x)}; 0 for x <= 0.
double speed_density(double x, const ModelParams& params);

/// Stationary cdf H(x) = e^{-2/(mu^2 x)}; 0 for x <= 0.
double stationary_cdf(double x, const ModelParams& params);

}  // namespace qsdsr
