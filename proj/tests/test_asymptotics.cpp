#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "qsdsr/asymptotics.hpp"
#include "qsdsr/eigensolver.hpp"
#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"

using namespace qsdsr;

namespace {

double w1_at(double lambda, double x, const ModelParams& p) {
  const auto se = SpectralIndex::from_lambda(lambda, p);
  return detail::whittaker_w_general(1, se.half_xi(), p.whittaker_arg(x));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("order one") {
    CHECK(lambda_order1(ModelParams(1.0, 20.0)) == -0.05);
    CHECK(lambda_approx(1, ModelParams(0.3, 400.0)) == -1.0 / 400.0);
  }

  TEST_CASE("orders bracket in accuracy") {
    for (double mu : {0.5, 1.0, 1.5}) {
      for (double A : {100.0, 1000.0, 10000.0}) {
        const ModelParams p(mu, A);
        const double exact = dominant_eigenvalue(p).lambda;
        const double e1 = std::abs(lambda_order1(p) - exact);
        const double e2 = std::abs(lambda_order2(p) - exact);
        const double e3 = std::abs(lambda_order3(p) - exact);
        CAPTURE(mu);
        CAPTURE(A);
        CHECK(e2 < e1);
        CHECK(e3 < e2);
      }
    }
  }

  TEST_CASE("scaled third-order error stays bounded") {
    std::vector<double> scaled;
    for (double A : {100.0, 1000.0, 10000.0, 100000.0}) {
      const ModelParams p(1.0, A);
      scaled.push_back(std::pow(A, 1.5) * std::abs(dominant_eigenvalue(p).lambda - lambda_order3(p)));
    }
    for (std::size_t i = 1; i < scaled.size(); ++i) CHECK(scaled[i] <= scaled[0]);
  }

  TEST_CASE("mu sign invariance") {
    for (int order : {1, 2, 3}) {
      CHECK(lambda_approx(order, ModelParams(-1.0, 50.0)) == lambda_approx(order, ModelParams(1.0, 50.0)));
      CHECK(pdf_approx(order, 7.0, ModelParams(-1.0, 50.0)) == pdf_approx(order, 7.0, ModelParams(1.0, 50.0)));
    }
  }

  TEST_CASE("index derivative closed forms") {
    for (int k = 1; k <= 3; ++k) {
      for (int i = 0; i <= 20; ++i) {
        const double x = 0.1 * std::pow(200.0, i / 20.0);
        const double closed = index_derivative_identity(k, x);
        const double numeric = index_derivative_numeric(k, x);
        CAPTURE(k);
        CAPTURE(x);
        CHECK(std::abs(numeric - closed) <= 1e-5 * std::abs(closed));
      }
    }
    CHECK(index_derivative_identity(1, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(index_derivative_identity(4, 1.0), Error);
  }

  TEST_CASE("second-order coefficient from index derivatives") {
    for (double mu : {0.5, 1.0, 2.0}) {
      const ModelParams p(mu, 50.0);
      for (double u : {0.05, 0.5, 3.0}) {
        const double x = 2.0 / (p.mu2() * u);
        const double from_b = 2.0 / (p.mu2() * p.mu2()) *
                              (index_derivative_numeric(2, u) - 2.0 * index_derivative_numeric(1, u));
        const double from_c2 = 2.0 / p.mu2() * std::exp(-u / 2) * expansion_coefficients(u, p).c2;
        CHECK(std::abs(from_b - from_c2) <= 1e-6 * std::abs(from_c2));

        // Probe: one-sided second difference in lambda (lambda > 0 is outside the domain).
        const double h = 1e-3 * p.mu2();
        const double probe =
            (2.0 * w1_at(0.0, x, p) - 5.0 * w1_at(-h, x, p) + 4.0 * w1_at(-2 * h, x, p) - w1_at(-3 * h, x, p)) /
            (2.0 * h * h);
        CAPTURE(mu);
        CAPTURE(u);
        CHECK(std::abs(probe - from_c2) <= 1e-4 * std::abs(from_c2));
      }
    }
  }

  TEST_CASE("third-order expansion at zero eigenvalue") {
    const ModelParams p(1.3, 50.0);
    for (double x : {0.2, 1.0, 10.0, 45.0}) {
      const double u = p.whittaker_arg(x);
      CHECK(whittaker_expansion3(x, 0.0, p) == doctest::Approx(u * std::exp(-u / 2)).epsilon(1e-14));
    }
  }

  TEST_CASE("expansion error is fourth order in lambda") {
    for (double mu : {0.7, 1.0}) {
      const ModelParams p(mu, 1000.0);
      for (double x : {2.0, 10.0}) {
        const double lambda = -0.01;
        const double err1 = std::abs(whittaker_expansion3(x, lambda, p) - w1_at(lambda, x, p));
        const double err2 = std::abs(whittaker_expansion3(x, lambda / 2, p) - w1_at(lambda / 2, x, p));
        CAPTURE(mu);
        CAPTURE(x);
        CHECK(err1 / err2 > 16.0 * 0.7);
        CHECK(err1 / err2 < 16.0 * 1.3);
      }
    }
  }

  TEST_CASE("approximate roots satisfy their polynomials") {
    for (double A : {20.0, 100.0, 10000.0}) {
      const ModelParams p(1.0, A);
      const ExpansionCoefficients c = expansion_coefficients(p.whittaker_arg(A), p);
      const double l2 = lambda_order2(p);
      const double l3 = lambda_order3(p);
      CHECK(std::abs(1.0 / A + l2 + c.c2 * l2 * l2) <= 1e-15 / A * 10);
      CHECK(std::abs(1.0 / A + l3 + c.c2 * l3 * l3 + c.c3 * l3 * l3 * l3) <= 1e-15 / A * 10);
      CHECK(c.c3 > 0.0);
      CHECK(l3 < 0.0);
    }
  }

  TEST_CASE("existence thresholds") {
    const double a_min = existence_threshold(2, 1.0);
    CHECK(a_min > 1.0);
    CHECK(a_min < 20.0);
    CHECK_NOTHROW(lambda_approx(2, ModelParams(1.0, a_min * 1.01)));
    CHECK(code_of([&] { lambda_approx(2, ModelParams(1.0, a_min * 0.99)); }) == ErrorCode::threshold_too_small);
    CHECK(existence_threshold(3, 1.0) < a_min);
    CHECK(code_of([] { lambda_approx(2, ModelParams(1.0, 3.0)); }) == ErrorCode::threshold_too_small);
    CHECK(existence_threshold(1, 1.0) == 1e-3);
    CHECK_THROWS_AS(lambda_approx(4, ModelParams(1.0, 20.0)), Error);
    CHECK_THROWS_AS(ApproxSolution(0, ModelParams(1.0, 20.0)), Error);
  }

  TEST_CASE("approximate densities") {
    for (int order : {1, 2, 3}) {
      const ApproxSolution s(order, ModelParams(1.0, 100.0));
      CHECK(s.order() == order);
      CHECK(s.denom() > 0.0);
      CHECK(std::abs(s.pdf(100.0)) < 1e-15);
      CHECK(s.pdf(0.0) == 0.0);
      CHECK(s.pdf(120.0) == 0.0);
      CHECK(s.pdf(50.0) > 0.0);
    }
    const ApproxSolution s3(3, ModelParams(1.0, 100.0));
    double total = 0.0;
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, {1.0, 10.0}, {10.0, 100.0}}) {
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double x) { return s3.pdf(x); }, lo, hi, 15, 1e-12);
    }
    CHECK(std::abs(total - 1.0) < 1e-3);
  }
}
