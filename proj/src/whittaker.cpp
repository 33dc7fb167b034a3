#include <cmath>
#include <complex>
#include <optional>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

using cplx = std::complex<double>;

constexpr double kIndexTolerance = 1e-14;
// Below this |b| the two connection-formula terms cancel to ~eps/|b|.
constexpr double kDegenerateB = 1e-3;
// Distance of 2b from an integer below which the Kummer denominators vanish.
constexpr double kIntegerOrder = 2e-8;
constexpr int kMaxAsymptoticTerms = 500;
constexpr int kMaxTaylorTerms = 400;
constexpr double kMaxTaylorStep = 5.0;

bool b_is_real(cplx b) { return b.imag() == 0.0; }

// Asymptotic large-z expansion: W = z^a e^{-z/2} S(z). Returns S and dS/dz if
// the divergent series reaches double resolution before its terms grow.
struct AsymptoticSum {
  double s;
  double ds;
};

std::optional<AsymptoticSum> asymptotic_sum(int a, double b2, double z) {
  double term = 1.0;
  double s = 1.0;
  double ds = 0.0;
  for (int n = 0; n < kMaxAsymptoticTerms; ++n) {
    const double shift = n + 0.5 - a;
    const double next = term * (shift * shift - b2) / ((n + 1.0) * (-z));
    if (next == 0.0) return AsymptoticSum{s, ds};
    if (std::abs(next) > std::abs(term) && n > 0) return std::nullopt;
    s += next;
    ds += -(n + 1.0) * next / z;
    if (std::abs(next) <= 1e-17 * std::abs(s)) return AsymptoticSum{s, ds};
    term = next;
  }
  return std::nullopt;
}

// One Taylor step of z^2 w'' = (z^2/4 - a z - c) w from zc to zc + h.
// Works with a_n = c_n h^n to keep the coefficients well scaled.
void taylor_step(int a, double c, double zc, double h, double& w, double& dw) {
  const double p0 = zc * zc / 4.0 - a * zc - c;
  const double p1 = zc / 2.0 - a;
  double am2 = 0.0;
  double am1 = 0.0;
  double an = w;
  double an1 = dw * h;
  double sum = an + an1;
  double dsum = an1;  // h * w'(zc + h)
  const double scale = std::abs(w) + std::abs(dw * h);
  int small = 0;
  for (int n = 0; n < kMaxTaylorTerms; ++n) {
    const double nn = n;
    const double an2 = (h * h * (p0 * an + p1 * h * am1 + 0.25 * h * h * am2 - nn * (nn - 1.0) * an) -
                        2.0 * zc * (nn + 1.0) * nn * h * an1) /
                       (zc * zc * (nn + 2.0) * (nn + 1.0));
    sum += an2;
    dsum += (nn + 2.0) * an2;
    const double mag = std::max({scale, std::abs(sum), std::abs(dsum)});
    small = std::abs(an2) * (nn + 2.0) <= 1e-18 * mag ? small + 1 : 0;
    if (small >= 3) {
      w = sum;
      dw = dsum / h;
      return;
    }
    am2 = am1;
    am1 = an;
    an = an1;
    an1 = an2;
  }
  fail(ErrorCode::convergence, "Whittaker ODE Taylor step did not converge");
}

// W and W' at z_start from the asymptotic series, moving outward until the
// series resolves to double precision.
void asymptotic_start(int a, double b2, double& z_start, double& w, double& dw) {
  for (int tries = 0; tries < 6; ++tries, z_start *= 2.0) {
    if (auto sum = asymptotic_sum(a, b2, z_start)) {
      const double pre = std::pow(z_start, a) * std::exp(-z_start / 2.0);
      w = pre * sum->s;
      dw = pre * (sum->s * (a / z_start - 0.5) + sum->ds);
      return;
    }
  }
  fail(ErrorCode::convergence, "Whittaker asymptotic series did not resolve");
}

// Scaled value e^{z/2} W via inward continuation of the ODE.
double by_continuation(int a, double b2, double z) {
  double z_cur = std::max(kAsymptoticSwitch, z);
  double w = 0.0;
  double dw = 0.0;
  asymptotic_start(a, b2, z_cur, w, dw);
  const double c = 0.25 - b2;
  while (z_cur > z) {
    const double h = -std::min({0.5 * z_cur, kMaxTaylorStep, z_cur - z});
    taylor_step(a, c, z_cur, h, w, dw);
    z_cur += h;
  }
  return w * std::exp(z / 2.0);
}

double by_asymptotic(int a, double b2, double z) {
  if (auto sum = asymptotic_sum(a, b2, z)) return std::pow(z, a) * sum->s;
  // Series failed to resolve at this z (large |b|); continue from further out.
  return by_continuation(a, b2, z);
}

// e^{z/2} W via the connection formula
//   W = G(-2b)/G(1/2-b-a) M_{a,b} + G(2b)/G(1/2+b-a) M_{a,-b}.
double by_connection(int a, cplx b, double z) {
  const cplx one_half(0.5, 0.0);
  const cplx c1 = gamma_cx(-2.0 * b) * rgamma_cx(one_half - b - double(a));
  const cplx c2 = gamma_cx(2.0 * b) * rgamma_cx(one_half + b - double(a));
  const cplx zc(z, 0.0);
  const cplx t1 = c1 * std::pow(zc, one_half + b) * detail::kummer_m(one_half + b - double(a), 1.0 + 2.0 * b, z);
  const cplx t2 = c2 * std::pow(zc, one_half - b) * detail::kummer_m(one_half - b - double(a), 1.0 - 2.0 * b, z);
  const cplx value = t1 + t2;
  if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value.real()))) {
    std::ostringstream os;
    os << "Whittaker connection formula left an imaginary residue " << value.imag();
    fail(ErrorCode::convergence, os.str());
  }
  return value.real();
}

// Elementary closed forms at b = +-1/2, scaled by e^{z/2}.
std::optional<double> closed_form_half(int a, double z) {
  switch (a) {
    case 0: return 1.0;
    case 1: return z;
    case 2: return z * (z - 2.0);
    default: return std::nullopt;
  }
}

bool near_integer_order(cplx b) {
  if (!b_is_real(b)) return false;
  const double two_b = 2.0 * b.real();
  return std::abs(two_b - std::round(two_b)) < kIntegerOrder;
}

}  // namespace

namespace detail {

cplx kummer_m(cplx alpha, cplx beta, double z) {
  cplx term(1.0, 0.0);
  cplx sum(1.0, 0.0);
  cplx comp(0.0, 0.0);
  const double alpha_mag = std::abs(alpha);
  for (int n = 0; n < 10000; ++n) {
    term *= (alpha + double(n)) / ((beta + double(n)) * (n + 1.0)) * z;
    // Kahan-compensated complex summation.
    const cplx y = term - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n + 1 > alpha_mag) return sum;
  }
  fail(ErrorCode::convergence, "Kummer series did not converge within 10000 terms");
}

double whittaker_w_general(int a, cplx b, double z, bool scaled, WhittakerRoute route) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream os;
    os << "Whittaker W requires z > 0, got " << z;
    fail(ErrorCode::domain, os.str());
  }
  if (b.real() != 0.0 && b.imag() != 0.0) {
    fail(ErrorCode::domain, "Whittaker second index must be real or purely imaginary");
  }
  const double b2 = b_is_real(b) ? b.real() * b.real() : -b.imag() * b.imag();

  double value = 0.0;
  if (route == WhittakerRoute::automatic) {
    const bool half = b_is_real(b) && std::abs(b.real()) == 0.5;
    if (half) {
      if (auto closed = closed_form_half(a, z)) {
        value = *closed;
        return scaled ? value : value * std::exp(-z / 2.0);
      }
    }
    if (z >= kAsymptoticSwitch) {
      route = WhittakerRoute::asymptotic;
    } else if (z <= kSeriesSwitch && std::abs(b) >= kDegenerateB && !near_integer_order(b)) {
      route = WhittakerRoute::connection;
    } else {
      route = WhittakerRoute::ode;
    }
  }
  switch (route) {
    case WhittakerRoute::connection:
      if (near_integer_order(b) || b == cplx(0.0, 0.0)) {
        fail(ErrorCode::domain, "connection formula undefined for integer 2b");
      }
      value = by_connection(a, b, z);
      break;
    case WhittakerRoute::asymptotic: value = by_asymptotic(a, b2, z); break;
    case WhittakerRoute::ode:
    case WhittakerRoute::automatic: value = by_continuation(a, b2, z); break;
  }
  return scaled ? value : value * std::exp(-z / 2.0);
}

}  // namespace detail

WhittakerIndex WhittakerIndex::make(int a, cplx b) {
  if (a < 0 || a > 2) {
    std::ostringstream os;
    os << "Whittaker first index must be 0, 1 or 2, got " << a;
    fail(ErrorCode::invalid_argument, os.str());
  }
  const bool real = b.imag() == 0.0;
  const bool imaginary = b.real() == 0.0;
  if (!real && !imaginary) {
    fail(ErrorCode::invalid_argument, "Whittaker second index must be real or purely imaginary");
  }
  if (real && (b.real() < -kIndexTolerance || b.real() > 0.5 + kIndexTolerance)) {
    std::ostringstream os;
    os << "real Whittaker second index must lie in [0, 1/2], got " << b.real();
    fail(ErrorCode::invalid_argument, os.str());
  }
  return WhittakerIndex{a, b};
}

double whittaker_w(const WhittakerIndex& idx, double z) {
  return detail::whittaker_w_general(idx.a, idx.b, z, false);
}

double whittaker_w_scaled(const WhittakerIndex& idx, double z) {
  return detail::whittaker_w_general(idx.a, idx.b, z, true);
}

}  // namespace qsdsr
