#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsdsr/error.hpp"
#include "qsdsr/oracle.hpp"

namespace qsdsr {
namespace {

constexpr double kUnderflowArg = 700.0;

// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

// Number of eigenvalues strictly greater than sigma (Sturm count via LDL^T pivots).
int count_above(const Tridiagonal& t, double sigma) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = t.diag[i] - sigma - coupling / d;
    if (d == 0.0) d = -1e-300;
    if (d > 0.0) ++count;
  }
  return count;
}

double largest_eigenvalue(const Tridiagonal& t) {
  // Gershgorin lower bound; the operator is negative definite so 0 is an upper bound.
  double lo = 0.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i < t.off.size() ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
  }
  double hi = 0.0;
  if (count_above(t, hi) != 0) fail(ErrorCode::convergence, "discretized operator has a nonnegative eigenvalue");
  // Shrink the bracket geometrically first; the dominant eigenvalue is tiny next to the spectral radius.
  double probe = -1.0;
  while (probe > lo && count_above(t, probe) == 0) {
    hi = probe;
    probe *= 2.0;
  }
  lo = std::max(lo, probe);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_above(t, mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Solve (T - sigma I) y = rhs by the Thomas algorithm.
std::vector<double> solve_shifted(const Tridiagonal& t, double sigma, const std::vector<double>& rhs) {
  const std::size_t n = t.diag.size();
  std::vector<double> c(n, 0.0);
  std::vector<double> y(n, 0.0);
  double denom = t.diag[0] - sigma;
  c[0] = n > 1 ? t.off[0] / denom : 0.0;
  y[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = t.diag[i] - sigma - t.off[i - 1] * c[i - 1];
    if (i + 1 < n) c[i] = t.off[i] / denom;
    y[i] = (rhs[i] - t.off[i - 1] * y[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
  return y;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double GridSolution::interpolate(double x) const {
  if (grid.empty() || x < grid.front() || x > grid.back()) return 0.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) return q_hat.back();
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - w) * q_hat[j - 1] + w * q_hat[j];
}

GridSolution sturm_liouville_eigen(const ModelParams& params, int n_grid) {
  if (n_grid < 100) {
    std::ostringstream os;
    os << "grid size must be at least 100, got " << n_grid;
    fail(ErrorCode::invalid_argument, os.str());
  }
  const double A = params.A();
  const double mu2 = params.mu2();
  auto log_h = [mu2](double x) { return x > 0.0 ? -2.0 / (mu2 * x) : -INFINITY; };

  std::vector<double> x;
  for (int i = 1; i <= n_grid; ++i) {
    const double xi = A * (double(i) / n_grid) * (double(i) / n_grid);
    if (params.whittaker_arg(xi) <= kUnderflowArg || i == n_grid) x.push_back(xi);
  }
  x.back() = A;
  const std::size_t n = x.size() - 1;  // unknowns: all nodes but A
  if (n < 10) fail(ErrorCode::invalid_argument, "too few grid nodes above the underflow cut");

  // Faces: the first cell starts at 0 (zero flux, H(0) = 0), the rest at midpoints.
  std::vector<double> log_face(n + 1);
  log_face[0] = -INFINITY;
  for (std::size_t i = 1; i <= n; ++i) log_face[i] = log_h(0.5 * (x[i - 1] + x[i]));
  // log of the exact cell mass H(right face) - H(left face)
  std::vector<double> log_mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = log_face[i] - log_face[i + 1];
    log_mass[i] = log_face[i + 1] + (std::isinf(d) ? 0.0 : std::log(-std::expm1(d)));
  }

  // K phi = lambda W phi, symmetrized with psi = sqrt(W) phi.
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.off.assign(n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Right face of cell i couples nodes i and i+1 (i+1 = n is the Dirichlet node).
    const double conductance = std::exp(log_face[i + 1] - log_mass[i]) / (x[i + 1] - x[i]);
    t.diag[i] -= conductance;
    if (i + 1 < n) {
      t.diag[i + 1] -= std::exp(log_face[i + 1] - log_mass[i + 1]) / (x[i + 1] - x[i]);
      t.off[i] = std::exp(log_face[i + 1] - 0.5 * (log_mass[i] + log_mass[i + 1])) / (x[i + 1] - x[i]);
    }
  }

  GridSolution out;
  out.lambda_hat = largest_eigenvalue(t);

  // Inverse iteration with a shift just above the top eigenvalue keeps
  // T - sigma I negative definite, so the Thomas sweep needs no pivoting.
  const double sigma = out.lambda_hat + 1e-9 * std::abs(out.lambda_hat);
  std::vector<double> psi(n, 1.0);
  double change = 1.0;
  for (int it = 0; it < 50 && change > 1e-13; ++it) {
    std::vector<double> next = solve_shifted(t, sigma, psi);
    const double nrm = norm2(next);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) fail(ErrorCode::convergence, "inverse iteration broke down");
    if (next[n / 2] < 0.0) {
      for (double& v : next) v = -v;
    }
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= nrm;
      change = std::max(change, std::abs(next[i] - psi[i]));
    }
    psi = std::move(next);
    out.inverse_iterations = it + 1;
  }
  if (change > 1e-10) {
    std::ostringstream os;
    os << "inverse iteration did not converge after " << out.inverse_iterations << " sweeps (last change "
       << change << ")";
    fail(ErrorCode::convergence, os.str());
  }

  // Energy-form Rayleigh quotient -sum H (dphi)^2 / dx / sum W phi^2. All
  // terms are positive, so it avoids the cancellation that limits the Sturm
  // bisection to about eps * ||T||.
  {
    double energy = 0.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = psi[i] * std::exp(-0.5 * log_mass[i]);
      const double phi_next = i + 1 < n ? psi[i + 1] * std::exp(-0.5 * log_mass[i + 1]) : 0.0;
      const double dphi = phi_next - phi;
      energy += std::exp(log_face[i + 1]) * dphi * dphi / (x[i + 1] - x[i]);
      weight += psi[i] * psi[i];
    }
    out.lambda_hat = -energy / weight;
  }

  // q = m phi with phi = psi / sqrt(W) and m(x) = 2/(mu^2 x^2) H(x).
  out.grid = x;
  out.q_hat.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double log_m = std::log(2.0 / (mu2 * x[i] * x[i])) + log_h(x[i]);
    out.q_hat[i] = std::max(0.0, psi[i]) * std::exp(log_m - 0.5 * log_mass[i]);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += 0.5 * (out.q_hat[i] + out.q_hat[i + 1]) * (x[i + 1] - x[i]);
  for (double& q : out.q_hat) q /= mass;
  return out;
}

}  // namespace qsdsr
