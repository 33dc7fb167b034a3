#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "qsdsr/error.hpp"
#include "qsdsr/oracle.hpp"
#include "qsdsr/qsd.hpp"
#include "qsdsr/specfun.hpp"
#include "reference_values.hpp"

using namespace qsdsr;

namespace {

// Independent quadrature: Boost's adaptive Gauss-Kronrod on the solver's breakpoints.
template <class F>
double boost_integral(F f, const std::vector<double>& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i - 1], pts[i], 15, 1e-13);
  }
  return total;
}

}  // namespace

TEST_SUITE("qsd") {
  TEST_CASE("denominator") {
    const QsdSolution s20 = build_solution(ModelParams(1.0, 20.0));
    CHECK(std::abs(s20.denom() - refvals::kDenomMu1A20) < 1e-13);
    CHECK(std::abs(build_solution(ModelParams(1.0, 10000.0)).denom() - 1.0) < 1e-2);
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {5.0, 20.0, 100.0, 1000.0}) CHECK(build_solution(ModelParams(mu, A)).denom() > 0.0);
    }
  }

  TEST_CASE("pdf boundary values and a reference point") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    CHECK(s.pdf(0.0) == 0.0);
    CHECK(s.pdf(20.0) == 0.0);
    CHECK(s.pdf(-1.0) == 0.0);
    CHECK(s.pdf(25.0) == 0.0);
    CHECK(std::abs(s.pdf(5.0) - refvals::kPdfAt5Mu1A20) < 1e-14);
    const GridSolution g = sturm_liouville_eigen(ModelParams(1.0, 20.0), 20000);
    CHECK(std::abs(s.pdf(5.0) - g.interpolate(5.0)) < 1e-4);
  }

  TEST_CASE("normalization") {
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {5.0, 20.0, 100.0, 1000.0}) {
        const QsdSolution s = build_solution(ModelParams(mu, A));
        CAPTURE(mu);
        CAPTURE(A);
        CHECK(std::abs(moment_quadrature(s, 0) - 1.0) < 1e-8);
        const double independent = boost_integral([&](double x) { return s.pdf(x); }, quadrature_breakpoints(s));
        CHECK(std::abs(independent - 1.0) < 1e-8);
      }
    }
  }

  TEST_CASE("cdf branches and consistency with the pdf") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    CHECK(s.cdf(20.0) == 1.0);
    CHECK(s.cdf(30.0) == 1.0);
    CHECK(s.cdf(0.0) == 0.0);
    CHECK(std::abs(s.cdf(std::nextafter(20.0, 0.0)) - 1.0) < 1e-12);

    std::vector<double> pts;
    for (double p : quadrature_breakpoints(s)) {
      if (p <= 10.0) pts.push_back(p);
    }
    if (pts.back() < 10.0) pts.push_back(10.0);
    const double half = boost_integral([&](double x) { return s.pdf(x); }, pts);
    CHECK(std::abs(s.cdf(10.0) - half) < 1e-8);

    double max_q = 0.0;
    for (int i = 1; i < 1000; ++i) max_q = std::max(max_q, s.pdf(20.0 * i / 1000));
    const double h = 1e-5 * 20.0;
    for (int i = 1; i < 100; ++i) {
      const double x = 20.0 * i / 100;
      const double fd = (s.cdf(x + h) - s.cdf(x - h)) / (2 * h);
      CHECK(std::abs(fd - s.pdf(x)) <= 1e-6 * max_q);
      const double dq = (s.pdf(x + h) - s.pdf(x - h)) / (2 * h);
      CHECK(std::abs(dq - s.pdf_derivative(x)) <= 1e-6 * max_q);
    }
  }

  TEST_CASE("monotone cdf, positive and unimodal pdf") {
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {5.0, 20.0, 100.0}) {
        const QsdSolution s = build_solution(ModelParams(mu, A));
        const int n = 10000;
        int changes = 0;
        int last_sign = 0;
        bool monotone = true;
        bool positive = true;
        double prev_q = s.pdf(0.0);
        double prev_c = s.cdf(0.0);
        for (int i = 1; i <= n; ++i) {
          const double x = A * i / n;
          const double q = s.pdf(x);
          const double c = s.cdf(x);
          monotone = monotone && c >= prev_c;
          if (i < n) positive = positive && std::isfinite(s.log_pdf(x));
          const int sign = (q > prev_q) - (q < prev_q);
          if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) ++changes;
            last_sign = sign;
          }
          prev_q = q;
          prev_c = c;
        }
        CAPTURE(mu);
        CAPTURE(A);
        CHECK(monotone);
        CHECK(positive);
        CHECK(changes == 1);
      }
    }
  }

  TEST_CASE("log density matches the density where both are representable") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    for (double x : {0.05, 0.5, 3.0, 15.0, 19.9}) CHECK(std::abs(std::exp(s.log_pdf(x)) / s.pdf(x) - 1.0) < 1e-13);
    CHECK(s.pdf(1e-4) == 0.0);
    CHECK(std::isfinite(s.log_pdf(1e-4)));
    CHECK(std::isinf(s.log_pdf(20.0)));
  }

  TEST_CASE("approach to the stationary law") {
    double last = INFINITY;
    for (double A : {1e2, 1e3, 1e4}) {
      const ModelParams p(1.0, A);
      const QsdSolution s = build_solution(p);
      double sup = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        const double x = 0.1 + 9.9 * i / 1000;
        sup = std::max(sup, std::abs(s.pdf(x) - speed_density(x, p)));
      }
      CAPTURE(A);
      CHECK(sup < last);
      last = sup;
    }
  }

  TEST_CASE("moments") {
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {5.0, 20.0, 100.0}) {
        const QsdSolution s = build_solution(ModelParams(mu, A));
        const double lambda = s.lambda();
        const MomentSeries m = moments(s, 20);
        REQUIRE(m.moments.size() == 21);
        CHECK(m.moments[0] == 1.0);
        for (int n = 1; n <= 20; ++n) {
          const double coef = mu * mu * n * (n - 1) / 2.0 - lambda;
          const double a_n = std::pow(A, n);
          const double residual = coef * m.moments[n] + n * m.moments[n - 1] + lambda * a_n;
          const double scale = std::abs(coef * m.moments[n]) + n * m.moments[n - 1] + std::abs(lambda * a_n);
          CHECK(std::abs(residual) <= 1e-12 * scale);
        }
        CHECK(std::abs(m.moments[1] - (A + 1.0 / lambda)) <= 1e-12 * m.moments[1]);
        CHECK(std::abs(mean_closed_form(s) - m.moments[1]) <= 1e-12 * m.moments[1]);
        const double var = m.moments[2] - m.moments[1] * m.moments[1];
        const double closed = -(mu * mu * std::pow(A + 1.0 / lambda, 2) + 1.0 / lambda) / (mu * mu - lambda);
        CHECK(std::abs(variance_closed_form(s) - closed) <= 1e-12 * closed);
        CHECK(std::abs(var - closed) <= 1e-9 * closed);
        CHECK(closed >= 0.0);
        for (int n = 1; n <= 5; ++n) CHECK(std::abs(moment_quadrature(s, n) / m.moments[n] - 1.0) < 1e-6);
      }
    }
  }

  TEST_CASE("moment order limits") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    CHECK(moments(s, kMaxMomentOrder).moments.size() == kMaxMomentOrder + 1);
    try {
      moments(s, kMaxMomentOrder + 1);
      FAIL("expected an overflow error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::overflow);
    }
    CHECK_THROWS_AS(moments(s, -1), Error);
  }

  TEST_CASE("mode") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    const double x_mode = mode(s);
    double max_slope = 0.0;
    for (int i = 1; i < 1000; ++i) max_slope = std::max(max_slope, std::abs(s.pdf_derivative(20.0 * i / 1000)));
    const double h = 1e-5 * 20.0;
    CHECK(std::abs((s.pdf(x_mode + h) - s.pdf(x_mode - h)) / (2 * h)) <= 1e-6 * max_slope);

    const int n = 100000;
    int best = 0;
    for (int i = 1; i <= n; ++i) {
      if (s.pdf(20.0 * i / n) > s.pdf(20.0 * best / n)) best = i;
    }
    CHECK(std::abs(x_mode - 20.0 * best / n) <= 20.0 / n);

    CHECK(std::abs(mode(build_solution(ModelParams(1.0, 1e4))) - 1.0) <= 0.05);
    const double m05 = mode(build_solution(ModelParams(0.5, 20.0)));
    const double m15 = mode(build_solution(ModelParams(1.5, 20.0)));
    CHECK(m05 > x_mode);
    CHECK(x_mode > m15);
  }

  TEST_CASE("boundary flux") {
    const QsdSolution s = build_solution(ModelParams(1.0, 20.0));
    CHECK(std::abs(boundary_flux_identity(s) / -0.058856148622 - 1.0) < 1e-5);
    CHECK(s.pdf_derivative(20.0) < 0.0);
    CHECK(std::abs(s.pdf_derivative(1e-3)) < 1e-300);
    CHECK(std::abs(s.pdf_derivative(0.02)) < 1e-30);
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {5.0, 20.0, 100.0}) {
        const QsdSolution t = build_solution(ModelParams(mu, A));
        CHECK(std::abs(boundary_flux_identity(t) / t.lambda() - 1.0) < 1e-5);
      }
    }
  }
}
