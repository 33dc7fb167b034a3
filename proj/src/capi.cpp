#include "qsdsr/qsdsr.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "qsdsr/asymptotics.hpp"
#include "qsdsr/error.hpp"
#include "qsdsr/oracle.hpp"
#include "qsdsr/qsd.hpp"
#include "qsdsr/specfun.hpp"

struct qsdsr_solution {
  qsdsr::QsdSolution sol;
};

struct qsdsr_approx {
  qsdsr::ApproxSolution approx;
};

struct qsdsr_grid_solution {
  qsdsr::GridSolution grid;
};

struct qsdsr_empirical {
  qsdsr::EmpiricalLaw law;
};

namespace {

thread_local std::string last_error;

qsdsr_status to_status(qsdsr::ErrorCode code) {
  return static_cast<qsdsr_status>(static_cast<int>(code));
}

template <class F>
qsdsr_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return QSDSR_OK;
  } catch (const qsdsr::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QSDSR_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QSDSR_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown exception";
    return QSDSR_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) qsdsr::fail(qsdsr::ErrorCode::invalid_argument, what);
}

template <class Eval>
qsdsr_status elementwise(const double* x, size_t n, double* out, Eval&& eval) {
  return guarded([&] {
    require(n == 0 || (x != nullptr && out != nullptr), "null array argument");
    for (size_t i = 0; i < n; ++i) out[i] = eval(x[i]);
  });
}

}  // namespace

extern "C" {

const char* qsdsr_version(void) { return "0.1.0"; }

const char* qsdsr_status_string(qsdsr_status status) {
  if (status == QSDSR_OK) return "ok";
  if (status == QSDSR_INTERNAL_ERROR) return "internal error";
  if (status >= QSDSR_INVALID_ARGUMENT && status <= QSDSR_OVERFLOW) {
    return qsdsr::to_string(static_cast<qsdsr::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown status";
}

const char* qsdsr_last_error(void) { return last_error.c_str(); }

qsdsr_status qsdsr_whittaker_w(int a, double b_re, double b_im, double z, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::whittaker_w(qsdsr::WhittakerIndex::make(a, {b_re, b_im}), z);
  });
}

qsdsr_status qsdsr_expint_e1(double x, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::exp_integral_e1(x);
  });
}

qsdsr_status qsdsr_meijer_g(double x, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::meijer_g_special(x);
  });
}

qsdsr_status qsdsr_lower_bound_l(double x, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::lower_bound_l(x);
  });
}

qsdsr_status qsdsr_solution_create(double mu, double A, double tol, qsdsr_solution** out) {
  return guarded([&] {
    require(out, "null output");
    *out = nullptr;
    qsdsr::EigenOptions opt;
    opt.tol = tol;
    *out = new qsdsr_solution{qsdsr::build_solution(qsdsr::ModelParams(mu, A), opt)};
  });
}

void qsdsr_solution_destroy(qsdsr_solution* sol) { delete sol; }

qsdsr_status qsdsr_solution_lambda(const qsdsr_solution* sol, double* lambda) {
  return guarded([&] {
    require(sol && lambda, "null argument");
    *lambda = sol->sol.lambda();
  });
}

qsdsr_status qsdsr_solution_denom(const qsdsr_solution* sol, double* denom) {
  return guarded([&] {
    require(sol && denom, "null argument");
    *denom = sol->sol.denom();
  });
}

qsdsr_status qsdsr_solution_residual(const qsdsr_solution* sol, double* residual) {
  return guarded([&] {
    require(sol && residual, "null argument");
    *residual = sol->sol.eigen().residual;
  });
}

qsdsr_status qsdsr_solution_bracket(const qsdsr_solution* sol, double* lo, double* hi) {
  return guarded([&] {
    require(sol && lo && hi, "null argument");
    *lo = sol->sol.eigen().bracket.lo;
    *hi = sol->sol.eigen().bracket.hi;
  });
}

qsdsr_status qsdsr_pdf(const qsdsr_solution* sol, const double* x, size_t n, double* out) {
  if (!sol) return guarded([] { require(false, "null solution"); });
  return elementwise(x, n, out, [sol](double v) { return sol->sol.pdf(v); });
}

qsdsr_status qsdsr_cdf(const qsdsr_solution* sol, const double* x, size_t n, double* out) {
  if (!sol) return guarded([] { require(false, "null solution"); });
  return elementwise(x, n, out, [sol](double v) { return sol->sol.cdf(v); });
}

qsdsr_status qsdsr_log_pdf(const qsdsr_solution* sol, const double* x, size_t n, double* out) {
  if (!sol) return guarded([] { require(false, "null solution"); });
  return elementwise(x, n, out, [sol](double v) { return sol->sol.log_pdf(v); });
}

qsdsr_status qsdsr_pdf_derivative(const qsdsr_solution* sol, const double* x, size_t n, double* out) {
  if (!sol) return guarded([] { require(false, "null solution"); });
  return elementwise(x, n, out, [sol](double v) { return sol->sol.pdf_derivative(v); });
}

qsdsr_status qsdsr_moments(const qsdsr_solution* sol, int n_max, double* out) {
  return guarded([&] {
    require(sol && out, "null argument");
    const qsdsr::MomentSeries m = qsdsr::moments(sol->sol, n_max);
    for (size_t i = 0; i < m.moments.size(); ++i) out[i] = m.moments[i];
  });
}

qsdsr_status qsdsr_moment_quadrature(const qsdsr_solution* sol, int n, double* out) {
  return guarded([&] {
    require(sol && out, "null argument");
    require(n >= 0, "moment order must be nonnegative");
    *out = qsdsr::moment_quadrature(sol->sol, n);
  });
}

qsdsr_status qsdsr_mean_variance(const qsdsr_solution* sol, double* mean, double* variance) {
  return guarded([&] {
    require(sol && mean && variance, "null argument");
    *mean = qsdsr::mean_closed_form(sol->sol);
    *variance = qsdsr::variance_closed_form(sol->sol);
  });
}

qsdsr_status qsdsr_mode(const qsdsr_solution* sol, double* out) {
  return guarded([&] {
    require(sol && out, "null argument");
    *out = qsdsr::mode(sol->sol);
  });
}

qsdsr_status qsdsr_boundary_flux(const qsdsr_solution* sol, double* out) {
  return guarded([&] {
    require(sol && out, "null argument");
    *out = qsdsr::boundary_flux_identity(sol->sol);
  });
}

qsdsr_status qsdsr_eigen_monotone(double mu, const double* A, size_t n, int* out) {
  return guarded([&] {
    require(out && (n == 0 || A), "null argument");
    *out = qsdsr::eigenvalue_monotonicity_check(mu, std::span<const double>(A, n)) ? 1 : 0;
  });
}

qsdsr_status qsdsr_lambda_approx(int order, double mu, double A, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::lambda_approx(order, qsdsr::ModelParams(mu, A));
  });
}

qsdsr_status qsdsr_approx_create(int order, double mu, double A, qsdsr_approx** out) {
  return guarded([&] {
    require(out, "null output");
    *out = nullptr;
    *out = new qsdsr_approx{qsdsr::ApproxSolution(order, qsdsr::ModelParams(mu, A))};
  });
}

void qsdsr_approx_destroy(qsdsr_approx* approx) { delete approx; }

qsdsr_status qsdsr_approx_lambda(const qsdsr_approx* approx, double* lambda) {
  return guarded([&] {
    require(approx && lambda, "null argument");
    *lambda = approx->approx.lambda_approx();
  });
}

qsdsr_status qsdsr_approx_pdf(const qsdsr_approx* approx, const double* x, size_t n, double* out) {
  if (!approx) return guarded([] { require(false, "null approximation"); });
  return elementwise(x, n, out, [approx](double v) { return approx->approx.pdf(v); });
}

qsdsr_status qsdsr_whittaker_expansion3(double x, double lambda, double mu, double* out) {
  return guarded([&] {
    require(out, "null output");
    // The expansion does not involve A; any admissible value works.
    *out = qsdsr::whittaker_expansion3(x, lambda, qsdsr::ModelParams(mu, 1.0));
  });
}

qsdsr_status qsdsr_index_derivative(int k, double x, int numeric, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = numeric ? qsdsr::index_derivative_numeric(k, x) : qsdsr::index_derivative_identity(k, x);
  });
}

qsdsr_status qsdsr_existence_threshold(int order, double mu, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::existence_threshold(order, mu);
  });
}

qsdsr_status qsdsr_sturm_liouville(double mu, double A, int n_grid, qsdsr_grid_solution** out) {
  return guarded([&] {
    require(out, "null output");
    *out = nullptr;
    *out = new qsdsr_grid_solution{qsdsr::sturm_liouville_eigen(qsdsr::ModelParams(mu, A), n_grid)};
  });
}

void qsdsr_grid_destroy(qsdsr_grid_solution* grid) { delete grid; }

qsdsr_status qsdsr_grid_lambda(const qsdsr_grid_solution* grid, double* lambda) {
  return guarded([&] {
    require(grid && lambda, "null argument");
    *lambda = grid->grid.lambda_hat;
  });
}

qsdsr_status qsdsr_grid_data(const qsdsr_grid_solution* grid, const double** x, const double** q, size_t* n) {
  return guarded([&] {
    require(grid && x && q && n, "null argument");
    *x = grid->grid.grid.data();
    *q = grid->grid.q_hat.data();
    *n = grid->grid.grid.size();
  });
}

qsdsr_status qsdsr_grid_interpolate(const qsdsr_grid_solution* grid, double x, double* out) {
  return guarded([&] {
    require(grid && out, "null argument");
    *out = grid->grid.interpolate(x);
  });
}

void qsdsr_mc_options_default(double A, qsdsr_mc_options* opt) {
  if (!opt) return;
  const qsdsr::MonteCarloOptions d;
  opt->headstart = d.headstart;
  opt->dt = d.dt;
  opt->horizon = A > 0.0 ? A : d.horizon;
  opt->n_paths = d.n_paths;
  opt->seed = d.seed;
  opt->n_bins = d.n_bins;
  opt->threads = 0;
  opt->checkpoints = nullptr;
  opt->n_checkpoints = 0;
}

qsdsr_status qsdsr_simulate(double mu, double A, const qsdsr_mc_options* opt, qsdsr_empirical** out) {
  return guarded([&] {
    require(opt && out, "null argument");
    require(opt->n_checkpoints == 0 || opt->checkpoints, "null checkpoint array");
    *out = nullptr;
    qsdsr::MonteCarloOptions o;
    o.headstart = opt->headstart;
    o.dt = opt->dt;
    o.horizon = opt->horizon;
    o.n_paths = opt->n_paths;
    o.seed = opt->seed;
    o.n_bins = opt->n_bins;
    o.threads = opt->threads;
    o.checkpoints.assign(opt->checkpoints, opt->checkpoints + opt->n_checkpoints);
    *out = new qsdsr_empirical{qsdsr::simulate_killed_sr(qsdsr::ModelParams(mu, A), o)};
  });
}

void qsdsr_empirical_destroy(qsdsr_empirical* law) { delete law; }

qsdsr_status qsdsr_empirical_counts(const qsdsr_empirical* law, int64_t* n_paths, int64_t* n_survivors) {
  return guarded([&] {
    require(law && n_paths && n_survivors, "null argument");
    *n_paths = law->law.n_paths_total;
    *n_survivors = law->law.n_survivors;
  });
}

qsdsr_status qsdsr_empirical_samples(const qsdsr_empirical* law, const double** sorted, size_t* n) {
  return guarded([&] {
    require(law && sorted && n, "null argument");
    *sorted = law->law.samples.data();
    *n = law->law.samples.size();
  });
}

qsdsr_status qsdsr_empirical_bins(const qsdsr_empirical* law, const double** edges, const double** masses,
                                  size_t* n_bins) {
  return guarded([&] {
    require(law && edges && masses && n_bins, "null argument");
    *edges = law->law.bin_edges.data();
    *masses = law->law.bin_masses.data();
    *n_bins = law->law.bin_masses.size();
  });
}

qsdsr_status qsdsr_empirical_checkpoints(const qsdsr_empirical* law, const double** times,
                                         const int64_t** survivors, size_t* n) {
  return guarded([&] {
    require(law && times && survivors && n, "null argument");
    *times = law->law.checkpoint_times.data();
    *survivors = law->law.checkpoint_survivors.data();
    *n = law->law.checkpoint_times.size();
  });
}

qsdsr_status qsdsr_empirical_decay_rate(const qsdsr_empirical* law, double* out) {
  return guarded([&] {
    require(law && out, "null argument");
    *out = qsdsr::survivor_decay_rate(law->law.checkpoint_times, law->law.checkpoint_survivors);
  });
}

qsdsr_status qsdsr_ks_vs_solution(const qsdsr_empirical* law, const qsdsr_solution* sol, double* out) {
  return guarded([&] {
    require(law && sol && out, "null argument");
    *out = qsdsr::ks_one_sample(law->law.samples, [sol](double x) { return sol->sol.cdf(x); });
  });
}

qsdsr_status qsdsr_ks_two_sample(const qsdsr_empirical* a, const qsdsr_empirical* b, double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = qsdsr::ks_two_sample(a->law.samples, b->law.samples);
  });
}

qsdsr_status qsdsr_ks_critical(double alpha, int64_t n, int64_t m, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = qsdsr::ks_critical(alpha, n, m);
  });
}

qsdsr_status qsdsr_integral_identity(double b_re, double b_im, double z, double* residual) {
  return guarded([&] {
    require(residual, "null output");
    *residual = qsdsr::integral_identity_check({b_re, b_im}, z);
  });
}

qsdsr_status qsdsr_norm_identity(const qsdsr_solution* sol, double rel_step, double* norm_squared, double* product,
                                 double* relative_residual) {
  return guarded([&] {
    require(sol && norm_squared && product && relative_residual, "null argument");
    const qsdsr::NormIdentity r = qsdsr::norm_identity_check(sol->sol.params(), sol->sol.index(), rel_step);
    *norm_squared = r.norm_squared;
    *product = r.product;
    *relative_residual = r.relative_residual;
  });
}

}  // extern "C"
