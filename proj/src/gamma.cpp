#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

using cplx = std::complex<double>;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma for Re z >= 1/2.
cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + double(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// sin(pi z) with exact reduction of the real part.
cplx sin_pi(cplx z) {
  const double n = std::round(z.real());
  const double f = z.real() - n;
  const double sign = std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0;
  const double pi = std::numbers::pi;
  const cplx s(std::sin(pi * f) * std::cosh(pi * z.imag()), std::cos(pi * f) * std::sinh(pi * z.imag()));
  return sign * s;
}

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

}  // namespace

cplx gamma_cx(cplx z) {
  if (is_pole(z)) {
    std::ostringstream os;
    os << "gamma pole at z = " << z.real();
    fail(ErrorCode::domain, os.str());
  }
  if (z.real() < 0.5) {
    return std::numbers::pi / (sin_pi(z) * std::exp(log_gamma_right(1.0 - z)));
  }
  return std::exp(log_gamma_right(z));
}

cplx rgamma_cx(cplx z) {
  if (is_pole(z)) return 0.0;
  if (z.real() < 0.5) {
    return sin_pi(z) * std::exp(log_gamma_right(1.0 - z)) / std::numbers::pi;
  }
  return std::exp(-log_gamma_right(z));
}

}  // namespace qsdsr
