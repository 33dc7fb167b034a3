#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qsdsr/params.hpp"

namespace qsdsr {

/// Finite-volume solution of the killed eigenproblem (H phi')' = lambda m phi on
/// (0, A), H(x) = e^{-2/(mu^2 x)}, zero flux at the left and phi(A) = 0.
struct GridSolution {
  std::vector<double> grid;   ///< increasing nodes, last one is A
  std::vector<double> q_hat;  ///< density m phi normalized by the trapezoid rule
  double lambda_hat = 0.0;
  int inverse_iterations = 0;

  /// Linear interpolation of q_hat; 0 outside [grid.front(), A].
  double interpolate(double x) const;
};

/// Nodes x_i = A (i/n)^2; nodes where 2/(mu^2 x) > 700 are dropped since the
/// speed measure underflows there. Requires n_grid >= 100.
GridSolution sturm_liouville_eigen(const ModelParams& params, int n_grid);

struct MonteCarloOptions {
  double headstart = 0.0;
  double dt = 1e-3;
  double horizon = 20.0;
  std::int64_t n_paths = 200000;
  std::uint64_t seed = 20240601;
  int n_bins = 100;
  /// Times (<= horizon) at which the number of surviving paths is recorded.
  std::vector<double> checkpoints;
  /// 0 means: QSD_SR_THREADS if set, else the hardware concurrency.
  int threads = 0;
};

/// Conditional law of R_T given survival, estimated by simulation.
struct EmpiricalLaw {
  std::vector<double> bin_edges;
  std::vector<double> bin_masses;
  std::vector<double> samples;  ///< sorted surviving values
  std::int64_t n_paths_total = 0;
  std::int64_t n_survivors = 0;
  std::uint64_t seed = 0;
  double headstart = 0.0;
  double horizon = 0.0;
  double dt = 0.0;
  std::vector<double> checkpoint_times;
  std::vector<std::int64_t> checkpoint_survivors;
};

/// Euler-Maruyama paths R_{k+1} = R_k + dt + mu R_k sqrt(dt) Z_k, killed at the
/// first crossing of A. Between grid points the crossing probability of the
/// frozen-coefficient Brownian bridge, exp(-2 (A-R_k)(A-R_{k+1}) / (mu^2 R_k^2 dt)),
/// is applied as an extra killing chance. Each path has its own generator
/// seeded by splitmix64 of (seed, path index) driving xoshiro256**, so results do not depend on the
/// thread count. Throws Error(insufficient_horizon) if no path survives.
EmpiricalLaw simulate_killed_sr(const ModelParams& params, const MonteCarloOptions& options);

/// Thread count from QSD_SR_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

/// sup |F_n(x) - F(x)| for sorted samples.
double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf);
/// sup |F_n(x) - G_m(x)| for two sorted samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Asymptotic critical value c(alpha) sqrt((n+m)/(n m)); m = 0 gives the one-sample 1/sqrt(n).
double ks_critical(double alpha, std::int64_t n, std::int64_t m = 0);

/// Least-squares slope of log(survivors) against time.
double survivor_decay_rate(std::span<const double> times, std::span<const std::int64_t> survivors);

/// |int_1^inf e^{-z x/2} W_{1,b}(z x) dx/x - e^{-z/2} W_{0,b}(z)|.
double integral_identity_check(std::complex<double> b, double z);

struct NormIdentity {
  double norm_squared = 0.0;  ///< int_0^A m phi^2 by quadrature
  double d_lambda = 0.0;      ///< d/d lambda W_{1,xi(lambda)/2}(2/(mu^2 A))
  double d_u = 0.0;           ///< d/du W_{1,xi/2}(u) at u = 2/(mu^2 A)
  double product = 0.0;       ///< (mu^2/2) d_lambda d_u
  double relative_residual = 0.0;
};

/// Checks ||phi||^2 = (mu^2/2) [dW/dlambda] [dW/du] at u = 2/(mu^2 A) for an
/// eigenpair with phi as in eigenfunction(). rel_step scales the difference
/// steps (relative to |lambda| and u).
NormIdentity norm_identity_check(const ModelParams& params, const SpectralIndex& se, double rel_step = 1e-3);

}  // namespace qsdsr
