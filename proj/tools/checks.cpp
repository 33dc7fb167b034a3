#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "api.hpp"
#include "table1_data.hpp"

namespace qsdsr_tools {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string label(double mu, double A) { return "mu=" + num(mu) + ",A=" + num(A); }

// Passes when value <= threshold; NaN fails.
Check upper(const std::string& suite, const std::string& name, double value, double threshold,
            std::string detail = {}) {
  return {suite, name, value <= threshold ? Verdict::pass : Verdict::fail, value, threshold, std::move(detail)};
}

Check boolean(const std::string& suite, const std::string& name, bool ok, std::string detail = {}) {
  return {suite, name, ok ? Verdict::pass : Verdict::fail, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double lambda_approx(int order, double mu, double A) {
  double v = 0.0;
  check(qsdsr_lambda_approx(order, mu, A, &v));
  return v;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "fail";
}

bool all_passed(const std::vector<Check>& checks) {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == Verdict::fail; });
}

Check skipped_check(const std::string& suite, const std::string& reason) {
  return {suite, suite, Verdict::skipped, 0.0, 0.0, reason};
}

std::vector<Check> table1_eigen_checks(double tol, double eigen_tol) {
  std::vector<Check> out;
  for (const Table1Row& row : kTable1) {
    const Solution sol(kTable1Mu, row.A, eigen_tol);
    const double neg = -sol.lambda();
    out.push_back(upper("table1", "lambda[A=" + num(row.A) + "]", std::abs(neg - row.neg_lambda), tol,
                        "computed " + num(neg)));
  }
  return out;
}

std::vector<Check> table1_approx_checks(double tol) {
  std::vector<Check> out;
  for (const Table1Row& row : kTable1) {
    const double ref[3] = {row.neg_lambda1, row.neg_lambda2, row.neg_lambda3};
    for (int k = 1; k <= 3; ++k) {
      const double neg = -lambda_approx(k, kTable1Mu, row.A);
      out.push_back(upper("table1", "lambda" + std::string(k, '*') + "[A=" + num(row.A) + "]",
                          std::abs(neg - ref[k - 1]), tol));
    }
  }
  return out;
}

std::vector<Check> table1_ordering_checks(double eigen_tol) {
  std::vector<Check> out;
  for (const Table1Row& row : kTable1) {
    const double lambda = Solution(kTable1Mu, row.A, eigen_tol).lambda();
    const double e1 = std::abs(lambda - lambda_approx(1, kTable1Mu, row.A));
    const double e2 = std::abs(lambda - lambda_approx(2, kTable1Mu, row.A));
    const double e3 = std::abs(lambda - lambda_approx(3, kTable1Mu, row.A));
    out.push_back(boolean("table1", "ordering[A=" + num(row.A) + "]", e3 <= e2 && e2 <= e1,
                          "errors " + num(e1) + " " + num(e2) + " " + num(e3)));
  }
  return out;
}

std::vector<Check> law_checks(double mu, double A, double eigen_tol) {
  const std::string suite = "normalization";
  const std::string at = "[" + label(mu, A) + "]";
  const Solution sol(mu, A, eigen_tol);
  std::vector<Check> out;

  double mass = 0.0;
  check(qsdsr_moment_quadrature(sol.get(), 0, &mass));
  out.push_back(upper(suite, "integral" + at, std::abs(mass - 1.0), 1e-8));

  const double below_A = std::nextafter(A, 0.0);
  out.push_back(upper(suite, "cdf_at_A" + at, std::abs(sol.cdf(below_A) - 1.0), 1e-12));

  constexpr std::size_t kGrid = 10000;
  const std::vector<double> x = linspace(0.0, A, kGrid + 1);
  const std::vector<double> cdf = sol.cdf(x);
  bool monotone = true;
  for (std::size_t i = 1; i < cdf.size(); ++i) monotone = monotone && cdf[i] >= cdf[i - 1];
  out.push_back(boolean(suite, "cdf_monotone" + at, monotone));

  const std::vector<double> interior(x.begin() + 1, x.end() - 1);
  const std::vector<double> log_q = sol.log_pdf(interior);
  const bool positive = std::all_of(log_q.begin(), log_q.end(), [](double v) { return std::isfinite(v); });
  out.push_back(boolean(suite, "positive" + at, positive));

  // Slope sign changes of q on the grid; flat stretches (underflow near 0) carry no sign.
  const std::vector<double> q = sol.pdf(x);
  int changes = 0;
  int last_sign = 0;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    const double d = q[i] - q[i - 1];
    const int s = (d > 0.0) - (d < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
    if (q[i] > q[peak]) peak = i;
  }
  out.push_back({suite, "unimodal" + at, changes == 1 ? Verdict::pass : Verdict::fail, double(changes), 1.0,
                 std::to_string(changes) + " slope sign change(s)"});

  double mode = 0.0;
  check(qsdsr_mode(sol.get(), &mode));
  const double h = A / kGrid;
  out.push_back(upper(suite, "mode" + at, std::abs(mode - x[peak]), h, "mode " + num(mode)));

  double flux = 0.0;
  check(qsdsr_boundary_flux(sol.get(), &flux));
  out.push_back(upper(suite, "boundary_flux" + at, rel(flux, sol.lambda()), 1e-5));
  return out;
}

std::vector<Check> moment_checks(double mu, double A, double eigen_tol) {
  const std::string at = "[" + label(mu, A) + "]";
  const Solution sol(mu, A, eigen_tol);
  const double lambda = sol.lambda();
  const double mu2 = mu * mu;
  std::vector<Check> out;

  constexpr int kMax = 20;
  std::vector<double> m(kMax + 1);
  check(qsdsr_moments(sol.get(), kMax, m.data()));
  double worst = 0.0;
  double a_pow = 1.0;
  for (int n = 1; n <= kMax; ++n) {
    a_pow *= A;
    const double coef = mu2 * n * (n - 1) / 2.0 - lambda;
    const double residual = coef * m[n] + n * m[n - 1] + lambda * a_pow;
    const double scale = std::abs(coef * m[n]) + n * std::abs(m[n - 1]) + std::abs(lambda * a_pow);
    worst = std::max(worst, std::abs(residual) / scale);
  }
  out.push_back(upper("moments", "recurrence" + at, worst, 1e-12));

  double mean = 0.0;
  double variance = 0.0;
  check(qsdsr_mean_variance(sol.get(), &mean, &variance));
  out.push_back(upper("moments", "mean" + at, std::max(rel(m[1], A + 1.0 / lambda), rel(mean, m[1])), 1e-12));
  out.push_back(upper("moments", "variance" + at, rel(variance, m[2] - m[1] * m[1]), 1e-9));

  double worst_quad = 0.0;
  for (int n = 1; n <= 5; ++n) {
    double quad = 0.0;
    check(qsdsr_moment_quadrature(sol.get(), n, &quad));
    worst_quad = std::max(worst_quad, rel(quad, m[n]));
  }
  out.push_back(upper("moments", "quadrature" + at, worst_quad, 1e-6));

  double lo = 0.0;
  double hi = 0.0;
  check(qsdsr_solution_bracket(sol.get(), &lo, &hi));
  out.push_back(boolean("moments", "variance_nonnegative" + at, variance >= 0.0 && lo <= lambda && lambda <= hi,
                        "variance " + num(variance) + ", lambda in [" + num(lo) + ", " + num(hi) + "]"));
  return out;
}

std::vector<Check> index_derivative_checks() {
  std::vector<Check> out;
  for (double x : {0.5, 2.0, 10.0}) {
    for (int k = 1; k <= 3; ++k) {
      double exact = 0.0;
      double numeric = 0.0;
      check(qsdsr_index_derivative(k, x, 0, &exact));
      check(qsdsr_index_derivative(k, x, 1, &numeric));
      out.push_back(upper("identities", "index_derivative[k=" + std::to_string(k) + ",x=" + num(x) + "]",
                          rel(numeric, exact), 1e-5));
    }
  }
  return out;
}

std::vector<Check> expansion_order_checks() {
  constexpr double kMu = 1.0;
  constexpr double kX = 10.0;
  constexpr double kLambda = -0.01;
  auto error = [](double lambda) {
    double approx = 0.0;
    check(qsdsr_whittaker_expansion3(kX, lambda, kMu, &approx));
    const double b = 0.5 * std::sqrt(1.0 + 8.0 * lambda / (kMu * kMu));
    double exact = 0.0;
    check(qsdsr_whittaker_w(1, b, 0.0, 2.0 / (kMu * kMu * kX), &exact));
    return std::abs(approx - exact);
  };
  const double ratio = error(kLambda) / error(kLambda / 2.0);
  Check c{"identities", "expansion_order", ratio >= 8.0 && ratio <= 32.0 ? Verdict::pass : Verdict::fail, ratio,
          32.0, "error ratio at lambda vs lambda/2, band [8, 32]"};
  return {c};
}

std::vector<Check> identity_checks(double mu, double A, double eigen_tol) {
  const std::string suite = "identities";
  std::vector<Check> out;
  struct Case {
    double b_re, b_im, z;
  };
  for (const Case& c : {Case{0.2, 0.0, 1.0}, Case{0.5, 0.0, 2.0}, Case{0.0, 0.25, 0.5}, Case{0.1, 0.0, 0.05}}) {
    double residual = 0.0;
    check(qsdsr_integral_identity(c.b_re, c.b_im, c.z, &residual));
    out.push_back(upper(suite, "integral[b=" + num(c.b_re) + (c.b_im != 0.0 ? "+" + num(c.b_im) + "i" : "") +
                                   ",z=" + num(c.z) + "]",
                        residual, 1e-8));
  }

  const Solution sol(mu, A, eigen_tol);
  double norm_sq = 0.0;
  double product = 0.0;
  double residual = 0.0;
  check(qsdsr_norm_identity(sol.get(), 1e-3, &norm_sq, &product, &residual));
  out.push_back(upper(suite, "norm[" + label(mu, A) + "]", residual, 1e-4));

  std::vector<double> grid;
  for (const Table1Row& row : kTable1) grid.push_back(row.A);
  int monotone = 0;
  check(qsdsr_eigen_monotone(mu, grid.data(), grid.size(), &monotone));
  out.push_back(boolean(suite, "eigen_monotone[mu=" + num(mu) + "]", monotone == 1));
  return out;
}

std::vector<Check> oracle_checks(double mu, double A, int n_grid, double eigen_tol) {
  const std::string suite = "oracle";
  const std::string at = "[" + label(mu, A) + ",n=" + std::to_string(n_grid) + "]";
  const Solution sol(mu, A, eigen_tol);
  qsdsr_grid_solution* raw = nullptr;
  check(qsdsr_sturm_liouville(mu, A, n_grid, &raw));
  const GridHandle grid(raw);

  double lambda_hat = 0.0;
  check(qsdsr_grid_lambda(grid.get(), &lambda_hat));
  const double* x = nullptr;
  const double* q = nullptr;
  std::size_t n = 0;
  check(qsdsr_grid_data(grid.get(), &x, &q, &n));
  const std::vector<double> exact = sol.pdf(std::span<const double>(x, n));
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::abs(q[i] - exact[i]));

  return {upper(suite, "lambda" + at, rel(lambda_hat, sol.lambda()), 1e-4, "grid lambda " + num(lambda_hat)),
          upper(suite, "density" + at, sup, 1e-4)};
}

std::vector<Check> monte_carlo_checks(double mu, double A, const McSettings& settings, double eigen_tol) {
  const std::string suite = "mc";
  const Solution sol(mu, A, eigen_tol);
  const double horizon = settings.horizon > 0.0 ? settings.horizon : A;
  const double checkpoints[4] = {0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
  const double headstarts[3] = {0.0, 0.25 * A, 0.75 * A};

  std::vector<Check> out;
  std::vector<EmpiricalHandle> laws;
  for (int k = 0; k < 3; ++k) {
    const double r = headstarts[k];
    qsdsr_mc_options opt;
    qsdsr_mc_options_default(A, &opt);
    opt.headstart = r;
    opt.dt = settings.dt;
    opt.horizon = horizon;
    opt.n_paths = settings.paths;
    // Independent streams per headstart; the two-sample test assumes independent samples.
    opt.seed = settings.seed + static_cast<std::uint64_t>(k);
    opt.checkpoints = checkpoints;
    opt.n_checkpoints = 4;
    qsdsr_empirical* raw = nullptr;
    check(qsdsr_simulate(mu, A, &opt, &raw));
    laws.emplace_back(raw);

    std::int64_t total = 0;
    std::int64_t survivors = 0;
    check(qsdsr_empirical_counts(raw, &total, &survivors));
    double ks = 0.0;
    double band = 0.0;
    check(qsdsr_ks_vs_solution(raw, sol.get(), &ks));
    check(qsdsr_ks_critical(0.01, survivors, 0, &band));
    const std::string at = "[r=" + num(r) + "]";
    // The fixed 0.01 target applies to the run started at 0; later headstarts keep
    // fewer survivors and are held to their own 99% band.
    out.push_back(upper(suite, "ks" + at, ks, k == 0 ? 0.01 : std::max(0.01, band),
                        std::to_string(survivors) + " of " + std::to_string(total) + " survived; 99% band " +
                            num(band)));
    double rate = 0.0;
    check(qsdsr_empirical_decay_rate(raw, &rate));
    out.push_back(upper(suite, "decay" + at, rel(rate, sol.lambda()), 0.1, "slope " + num(rate)));
  }
  for (std::size_t i = 0; i < laws.size(); ++i) {
    for (std::size_t j = i + 1; j < laws.size(); ++j) {
      std::int64_t total = 0;
      std::int64_t ni = 0;
      std::int64_t nj = 0;
      check(qsdsr_empirical_counts(laws[i].get(), &total, &ni));
      check(qsdsr_empirical_counts(laws[j].get(), &total, &nj));
      double d = 0.0;
      double band = 0.0;
      check(qsdsr_ks_two_sample(laws[i].get(), laws[j].get(), &d));
      check(qsdsr_ks_critical(0.01, ni, nj, &band));
      out.push_back(upper(suite, "headstart[r=" + num(headstarts[i]) + " vs r=" + num(headstarts[j]) + "]", d, band,
                          "two-sample KS against its 99% band"));
    }
  }
  return out;
}

}  // namespace qsdsr_tools
