#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "doctest.h"
#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"
#include "reference_values.hpp"

using namespace qsdsr;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double W(int a, std::complex<double> b, double z) { return whittaker_w(WhittakerIndex::make(a, b), z); }

// Independent W by classical RK4 on W'' = (1/4 - a/z + (b^2 - 1/4)/z^2) W,
// started at z = 80 from the asymptotic series and integrated inward.
double whittaker_rk4(int a, double b, double z_target) {
  const double z0 = 80.0;
  double s = 1.0;
  double ds = 0.0;
  double term = 1.0;
  for (int n = 1; n < 40; ++n) {
    term *= -(0.5 + b - a + n - 1) * (0.5 - b - a + n - 1) / (n * z0);
    if (std::abs(term) < 1e-18) break;
    s += term;
    ds += -n * term / z0;
  }
  const double pre = std::exp(-z0 / 2.0) * std::pow(z0, a);
  double w = pre * s;
  double dw = w * (-0.5 + a / z0) + pre * ds;
  auto q = [&](double z) { return 0.25 - a / z + (b * b - 0.25) / (z * z); };
  const int steps = static_cast<int>(std::ceil((z0 - z_target) / 1e-3));
  const double h = -(z0 - z_target) / steps;
  double z = z0;
  for (int i = 0; i < steps; ++i) {
    const double k1w = dw, k1d = q(z) * w;
    const double k2w = dw + 0.5 * h * k1d, k2d = q(z + 0.5 * h) * (w + 0.5 * h * k1w);
    const double k3w = dw + 0.5 * h * k2d, k3d = q(z + 0.5 * h) * (w + 0.5 * h * k2w);
    const double k4w = dw + h * k3d, k4d = q(z + h) * (w + h * k3w);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    dw += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    z += h;
  }
  return w;
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("gamma at simple points and against reflection") {
    CHECK(std::abs(gamma_cx(1.0) - 1.0) < 1e-15);
    CHECK(rel_err(gamma_cx(0.5).real(), std::sqrt(std::numbers::pi)) < 1e-14);
    const std::complex<double> g = gamma_cx({1.0, 2.0});
    CHECK(rel_err(g.real(), refvals::kGamma1p2iRe) < 1e-13);
    CHECK(rel_err(g.imag(), refvals::kGamma1p2iIm) < 1e-12);
    const std::complex<double> z{0.3, 0.7};
    const std::complex<double> lhs = gamma_cx(z) * gamma_cx(1.0 - z);
    const std::complex<double> rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-13);
  }

  TEST_CASE("gamma poles") {
    CHECK_THROWS_AS(gamma_cx(0.0), Error);
    CHECK_THROWS_AS(gamma_cx(-3.0), Error);
    CHECK(std::abs(rgamma_cx(-2.0)) == 0.0);
  }

  TEST_CASE("whittaker closed forms at b = 1/2") {
    CHECK(rel_err(W(1, 0.5, 2.0), 2.0 * std::exp(-1.0)) < 1e-15);
    CHECK(rel_err(W(0, 0.5, 1.0), std::exp(-0.5)) < 1e-15);
    CHECK(rel_err(W(0, 0.5, 1.0), 0.6065306597) < 1e-10);
  }

  TEST_CASE("reference eigenvalue at A = 20 is a root of the eigenvalue equation") {
    const double lambda = -0.058856148622;
    const double b = 0.5 * std::sqrt(1.0 + 8.0 * lambda);
    CHECK(std::abs(W(1, b, 0.1)) < 1e-9);
  }

  TEST_CASE("whittaker against frozen high-precision values") {
    for (const auto& e : refvals::kWhittaker) {
      CAPTURE(e.a);
      CAPTURE(e.b_re);
      CAPTURE(e.b_im);
      CAPTURE(e.z);
      const double got = W(e.a, {e.b_re, e.b_im}, e.z);
      CHECK(std::abs(got - e.value) <= 1e-10 * std::abs(e.value) + 1e-15);
    }
  }

  TEST_CASE("whittaker against an independent inward RK4 integration") {
    for (int a : {0, 1, 2}) {
      for (double z : {1.0, 5.0, 20.0}) {
        CAPTURE(a);
        CAPTURE(z);
        CHECK(rel_err(W(a, 0.3, z), whittaker_rk4(a, 0.3, z)) < 1e-9);
      }
    }
  }

  TEST_CASE("b-sign symmetry") {
    for (int a : {0, 1, 2}) {
      for (std::complex<double> b : {std::complex<double>{0.3, 0.0}, {0.1, 0.0}, {0.0, 0.25}, {0.0, 1.3}}) {
        for (double z : {0.05, 0.7, 3.0, 25.0, 70.0}) {
          const double plus = detail::whittaker_w_general(a, b, z);
          const double minus = detail::whittaker_w_general(a, -b, z);
          CHECK(std::abs(plus - minus) <= 1e-11 * std::abs(plus) + 1e-300);
        }
      }
    }
  }

  TEST_CASE("whittaker ODE residual") {
    for (int a : {0, 1, 2}) {
      for (std::complex<double> b : {std::complex<double>{0.3, 0.0}, {0.0, 0.4}, {0.05, 0.0}}) {
        for (double z : {0.5, 1.5, 10.0, 30.0}) {
          const double w0 = detail::whittaker_w_general(a, b, z);
          auto diff2 = [&](double h) {
            return (detail::whittaker_w_general(a, b, z + h) - 2.0 * w0 + detail::whittaker_w_general(a, b, z - h)) /
                   (h * h);
          };
          const double h = 2e-3 * z;
          const double second = (4.0 * diff2(h / 2.0) - diff2(h)) / 3.0;
          const double coef = 0.25 - a / z + ((b * b).real() - 0.25) / (z * z);
          const double scale = std::abs(second) + std::abs(coef * w0);
          CAPTURE(a);
          CAPTURE(z);
          CHECK(std::abs(second - coef * w0) <= 1e-6 * scale);
        }
      }
    }
  }

  TEST_CASE("evaluation routes agree where they overlap") {
    using detail::WhittakerRoute;
    for (int a : {0, 1, 2}) {
      for (std::complex<double> b : {std::complex<double>{0.3, 0.0}, {0.0, 0.25}}) {
        for (double z : {1.2, 1.6, 2.0, 2.5}) {
          const double c = detail::whittaker_w_general(a, b, z, false, WhittakerRoute::connection);
          const double o = detail::whittaker_w_general(a, b, z, false, WhittakerRoute::ode);
          CHECK(std::abs(c - o) <= 1e-8 * std::abs(o));
        }
        for (double z : {36.0, 40.0, 44.0}) {
          const double o = detail::whittaker_w_general(a, b, z, true, WhittakerRoute::ode);
          const double s = detail::whittaker_w_general(a, b, z, true, WhittakerRoute::asymptotic);
          CHECK(std::abs(o - s) <= 1e-8 * std::abs(s));
        }
      }
    }
  }

  TEST_CASE("small-argument law") {
    // Leading behaviour z^{1/2-b} Gamma(2b)/Gamma(b+1/2); the next term is
    // relatively O(z^{2b}), so b close to 1/2 keeps it below 1e-4 at z = 1e-6.
    const double z = 1e-6;
    for (double b : {0.4, 0.45, 0.49}) {
      const double scaled = std::pow(z, b - 0.5) * std::exp(z / 2.0) * W(0, b, z);
      CAPTURE(b);
      CHECK(rel_err(scaled, std::tgamma(2.0 * b) / std::tgamma(b + 0.5)) < 1e-4);
    }
  }

  TEST_CASE("degenerate index near zero stays continuous") {
    for (int a : {0, 1, 2}) {
      for (double z : {0.1, 1.0, 5.0}) {
        const double w0 = W(a, 0.0, z);
        CHECK(std::abs(W(a, 1e-7, z) - w0) <= 1e-9 * std::abs(w0) + 1e-15);
        CHECK(std::abs(W(a, std::complex<double>{0.0, 1e-7}, z) - w0) <= 1e-9 * std::abs(w0) + 1e-15);
      }
    }
  }

  TEST_CASE("scaled whittaker does not underflow") {
    const auto idx = WhittakerIndex::make(1, 0.3);
    CHECK(W(1, 0.3, 3000.0) == 0.0);
    const double s = whittaker_w_scaled(idx, 3000.0);
    CHECK(std::isfinite(s));
    CHECK(rel_err(s, 3000.0) < 1e-3);  // e^{z/2} W_{1,b}(z) ~ z
  }

  TEST_CASE("whittaker argument validation") {
    CHECK_THROWS_AS(W(1, 0.3, 0.0), Error);
    CHECK_THROWS_AS(W(1, 0.3, -1.0), Error);
    CHECK_THROWS_AS(WhittakerIndex::make(3, 0.3), Error);
    CHECK_THROWS_AS(WhittakerIndex::make(1, 0.7), Error);
    CHECK_THROWS_AS(WhittakerIndex::make(1, {0.2, 0.2}), Error);
    try {
      W(1, 0.3, -1.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::domain);
    }
  }

  TEST_CASE("exponential integral") {
    CHECK(rel_err(exp_integral_e1(1.0), 0.2193839343955) < 1e-12);
    CHECK(rel_err(exp_integral_e1(1.0), refvals::kE1At1) < 1e-14);
    CHECK(rel_err(exp_integral_e1(0.1), refvals::kE1At0p1) < 1e-14);
    CHECK(rel_err(exp_integral_e1(1.5), refvals::kE1At1p5) < 1e-13);
    CHECK(rel_err(exp_integral_e1(10.0), refvals::kE1At10) < 1e-13);
    CHECK(std::abs(500.0 * exp_integral_e1_scaled(500.0) - 1.0) < 1e-2);
    CHECK(std::abs(exp_integral_e1(1e-8) + std::log(1e-8) + std::numbers::egamma) < 1e-7);
    CHECK_THROWS_AS(exp_integral_e1(0.0), Error);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), Error);
  }

  TEST_CASE("exponential integral against Boost") {
    for (double x = 0.01; x < 200.0; x *= 1.37) {
      CAPTURE(x);
      CHECK(rel_err(exp_integral_e1(x), boost::math::expint(1, x)) < 1e-12);
    }
  }

  TEST_CASE("Meijer G special case") {
    CHECK(std::abs(1000.0 * meijer_g_special(1000.0) - 1.0) < 1e-2);
    CHECK(rel_err(meijer_g_special(1.0), refvals::kGAt1) < 1e-10);
    CHECK(rel_err(meijer_g_special(0.1), refvals::kGAt0p1) < 1e-10);
    CHECK(rel_err(meijer_g_special(10.0), refvals::kGAt10) < 1e-10);
    CHECK_THROWS_AS(meijer_g_special(0.0), Error);
  }

  TEST_CASE("Meijer G equals the tail integral of e^y E1(y)/y") {
    // Quadrature up to Y = 600, then the asymptotic e^y E1(y) ~ 1/y - 1/y^2 + 2/y^3 - 6/y^4.
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double Y = 600.0;
    const double far = 1.0 / Y - 1.0 / (2 * Y * Y) + 2.0 / (3 * Y * Y * Y) - 6.0 / (4 * Y * Y * Y * Y);
    for (double x : {1.0, 2.0}) {
      const double tail =
          integrator.integrate([](double y) { return std::exp(y) * boost::math::expint(1, y) / y; }, x, Y) + far;
      CAPTURE(x);
      CHECK(std::abs(meijer_g_special(x) - tail) < 1e-9);
    }
  }

  TEST_CASE("lower-bound function L") {
    CHECK(std::abs(lower_bound_l(1000.0)) <= 1e-2);
    CHECK(lower_bound_l(1000.0) > 0.0);
    for (double x : {0.01, 0.1, 1.0, 10.0}) CHECK(lower_bound_l(x) > 0.0);
    CHECK(rel_err(lower_bound_l(0.1), refvals::kLAt0p1) < 1e-10);
    CHECK(rel_err(lower_bound_l(1.0), refvals::kLAt1) < 1e-10);
    CHECK(rel_err(lower_bound_l(2.0), refvals::kLAt2) < 1e-10);
    CHECK(rel_err(lower_bound_l(10.0), refvals::kLAt10) < 1e-10);
  }

  TEST_CASE("stationary law") {
    for (double mu : {0.5, 1.0, 1.5}) {
      const ModelParams p(mu, 20.0);
      const double mode = 1.0 / p.mu2();
      CHECK(speed_density(mode, p) > speed_density(mode * 0.99, p));
      CHECK(speed_density(mode, p) > speed_density(mode * 1.01, p));
      CHECK(std::abs(stationary_cdf(2.0 / p.mu2(), p) - std::exp(-1.0)) < 1e-15);
      boost::math::quadrature::tanh_sinh<double> head;
      boost::math::quadrature::exp_sinh<double> tail;
      const double total = head.integrate([&](double x) { return speed_density(x, p); }, 0.0, 1.0) +
                           tail.integrate([&](double t) { return speed_density(1.0 + t, p); });
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
    const ModelParams p(1.0, 20.0);
    CHECK(speed_density(0.0, p) == 0.0);
    CHECK(stationary_cdf(-1.0, p) == 0.0);
  }
}
