/* C interface to the quasi-stationary distribution library for the killed
 * Generalized Shiryaev-Roberts diffusion dR = dt + mu R dB on [0, A).
 *
 * Every function returns a qsdsr_status. On failure the message of the last
 * error on the calling thread is available from qsdsr_last_error(). Handles
 * are opaque; each *_create has a matching *_destroy that accepts NULL. */
#ifndef QSDSR_H
#define QSDSR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QSDSR_API __declspec(dllexport)
#else
#define QSDSR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsdsr_status {
  QSDSR_OK = 0,
  QSDSR_INVALID_ARGUMENT = 1,
  QSDSR_DOMAIN_ERROR = 2,
  QSDSR_CONVERGENCE_FAILURE = 3,
  QSDSR_BRACKET_FAILURE = 4,
  QSDSR_AMBIGUOUS_ROOT = 5,
  QSDSR_THRESHOLD_TOO_SMALL = 6,
  QSDSR_INSUFFICIENT_HORIZON = 7,
  QSDSR_OVERFLOW = 8,
  QSDSR_INTERNAL_ERROR = 99
} qsdsr_status;

QSDSR_API const char* qsdsr_version(void);
QSDSR_API const char* qsdsr_status_string(qsdsr_status status);
/* Message of the most recent failure on this thread ("" if none). */
QSDSR_API const char* qsdsr_last_error(void);

/* ---- special functions ---- */

/* W_{a,b}(z) with a in {0,1,2} and b = b_re + i b_im either real in [0, 1/2]
 * or purely imaginary. */
QSDSR_API qsdsr_status qsdsr_whittaker_w(int a, double b_re, double b_im, double z, double* out);
QSDSR_API qsdsr_status qsdsr_expint_e1(double x, double* out);
/* int_0^inf e^{-xy} log(1+y)/y dy */
QSDSR_API qsdsr_status qsdsr_meijer_g(double x, double* out);
/* e^x E1(x) - 1 + x G(x) */
QSDSR_API qsdsr_status qsdsr_lower_bound_l(double x, double* out);

/* ---- exact solution ---- */

typedef struct qsdsr_solution qsdsr_solution;

/* Solve for the dominant eigenvalue (absolute tolerance tol > 0, e.g. 1e-13)
 * and build the normalized law. */
QSDSR_API qsdsr_status qsdsr_solution_create(double mu, double A, double tol, qsdsr_solution** out);
QSDSR_API void qsdsr_solution_destroy(qsdsr_solution* sol);

QSDSR_API qsdsr_status qsdsr_solution_lambda(const qsdsr_solution* sol, double* lambda);
QSDSR_API qsdsr_status qsdsr_solution_denom(const qsdsr_solution* sol, double* denom);
QSDSR_API qsdsr_status qsdsr_solution_residual(const qsdsr_solution* sol, double* residual);
QSDSR_API qsdsr_status qsdsr_solution_bracket(const qsdsr_solution* sol, double* lo, double* hi);

/* Elementwise over x[0..n). */
QSDSR_API qsdsr_status qsdsr_pdf(const qsdsr_solution* sol, const double* x, size_t n, double* out);
QSDSR_API qsdsr_status qsdsr_cdf(const qsdsr_solution* sol, const double* x, size_t n, double* out);
/* log q(x); finite on (0, A) even where q itself underflows. */
QSDSR_API qsdsr_status qsdsr_log_pdf(const qsdsr_solution* sol, const double* x, size_t n, double* out);
QSDSR_API qsdsr_status qsdsr_pdf_derivative(const qsdsr_solution* sol, const double* x, size_t n, double* out);

/* out must hold n_max + 1 values M_0..M_{n_max}; n_max <= 50. */
QSDSR_API qsdsr_status qsdsr_moments(const qsdsr_solution* sol, int n_max, double* out);
QSDSR_API qsdsr_status qsdsr_moment_quadrature(const qsdsr_solution* sol, int n, double* out);
QSDSR_API qsdsr_status qsdsr_mean_variance(const qsdsr_solution* sol, double* mean, double* variance);
QSDSR_API qsdsr_status qsdsr_mode(const qsdsr_solution* sol, double* out);
/* A^2 (mu^2/2) q'(A) by a one-sided difference; equals lambda. */
QSDSR_API qsdsr_status qsdsr_boundary_flux(const qsdsr_solution* sol, double* out);

/* 1 if the dominant eigenvalue strictly increases along the increasing grid A[0..n). */
QSDSR_API qsdsr_status qsdsr_eigen_monotone(double mu, const double* A, size_t n, int* out);

/* ---- large-threshold approximations (order 1, 2 or 3) ---- */

typedef struct qsdsr_approx qsdsr_approx;

QSDSR_API qsdsr_status qsdsr_lambda_approx(int order, double mu, double A, double* out);
QSDSR_API qsdsr_status qsdsr_approx_create(int order, double mu, double A, qsdsr_approx** out);
QSDSR_API void qsdsr_approx_destroy(qsdsr_approx* approx);
QSDSR_API qsdsr_status qsdsr_approx_lambda(const qsdsr_approx* approx, double* lambda);
QSDSR_API qsdsr_status qsdsr_approx_pdf(const qsdsr_approx* approx, const double* x, size_t n, double* out);
/* Third-order approximation of W_{1,xi(lambda)/2}(2/(mu^2 x)). */
QSDSR_API qsdsr_status qsdsr_whittaker_expansion3(double x, double lambda, double mu, double* out);
/* k-th derivative in b of W_{1,b}(x) at b = 1/2: closed form, or numeric != 0
 * for Richardson-extrapolated central differences. */
QSDSR_API qsdsr_status qsdsr_index_derivative(int k, double x, int numeric, double* out);
/* Smallest threshold (searched in [1e-3, 1e6]) where the order-K eigenvalue
 * approximation exists. */
QSDSR_API qsdsr_status qsdsr_existence_threshold(int order, double mu, double* out);

/* ---- independent oracles ---- */

typedef struct qsdsr_grid_solution qsdsr_grid_solution;

QSDSR_API qsdsr_status qsdsr_sturm_liouville(double mu, double A, int n_grid, qsdsr_grid_solution** out);
QSDSR_API void qsdsr_grid_destroy(qsdsr_grid_solution* grid);
QSDSR_API qsdsr_status qsdsr_grid_lambda(const qsdsr_grid_solution* grid, double* lambda);
/* Borrowed pointers, valid until the handle is destroyed. */
QSDSR_API qsdsr_status qsdsr_grid_data(const qsdsr_grid_solution* grid, const double** x, const double** q,
                                       size_t* n);
QSDSR_API qsdsr_status qsdsr_grid_interpolate(const qsdsr_grid_solution* grid, double x, double* out);

typedef struct qsdsr_mc_options {
  double headstart;
  double dt;
  double horizon;
  int64_t n_paths;
  uint64_t seed;
  int n_bins;
  int threads; /* 0: QSD_SR_THREADS or hardware concurrency */
  const double* checkpoints;
  size_t n_checkpoints;
} qsdsr_mc_options;

/* Defaults: headstart 0, dt 1e-3, horizon A (pass the threshold), 2e5 paths,
 * seed 20240601, 100 bins, no checkpoints. */
QSDSR_API void qsdsr_mc_options_default(double A, qsdsr_mc_options* opt);

typedef struct qsdsr_empirical qsdsr_empirical;

QSDSR_API qsdsr_status qsdsr_simulate(double mu, double A, const qsdsr_mc_options* opt, qsdsr_empirical** out);
QSDSR_API void qsdsr_empirical_destroy(qsdsr_empirical* law);
QSDSR_API qsdsr_status qsdsr_empirical_counts(const qsdsr_empirical* law, int64_t* n_paths, int64_t* n_survivors);
QSDSR_API qsdsr_status qsdsr_empirical_samples(const qsdsr_empirical* law, const double** sorted, size_t* n);
QSDSR_API qsdsr_status qsdsr_empirical_bins(const qsdsr_empirical* law, const double** edges, const double** masses,
                                            size_t* n_bins);
QSDSR_API qsdsr_status qsdsr_empirical_checkpoints(const qsdsr_empirical* law, const double** times,
                                                   const int64_t** survivors, size_t* n);
/* Slope of log(survivors) against the checkpoint times. */
QSDSR_API qsdsr_status qsdsr_empirical_decay_rate(const qsdsr_empirical* law, double* out);
QSDSR_API qsdsr_status qsdsr_ks_vs_solution(const qsdsr_empirical* law, const qsdsr_solution* sol, double* out);
QSDSR_API qsdsr_status qsdsr_ks_two_sample(const qsdsr_empirical* a, const qsdsr_empirical* b, double* out);
/* m = 0 for the one-sample band. */
QSDSR_API qsdsr_status qsdsr_ks_critical(double alpha, int64_t n, int64_t m, double* out);

/* |int_1^inf e^{-zx/2} W_{1,b}(zx) dx/x - e^{-z/2} W_{0,b}(z)| */
QSDSR_API qsdsr_status qsdsr_integral_identity(double b_re, double b_im, double z, double* residual);
/* ||phi||^2 by quadrature against (mu^2/2) dW/dlambda dW/du. */
QSDSR_API qsdsr_status qsdsr_norm_identity(const qsdsr_solution* sol, double rel_step, double* norm_squared,
                                           double* product, double* relative_residual);

#ifdef __cplusplus
}
#endif

#endif
