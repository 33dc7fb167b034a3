#pragma once

#include <span>

#include "qsdsr/params.hpp"

namespace qsdsr {

/// Closed-form bounds on the dominant eigenvalue implied by Var >= 0:
///   lo = -1/A - (1 + sqrt(4 mu^2 A + 1)) / (2 mu^2 A^2)
///   hi = -1/A - (1 - sqrt(4 mu^2 A + 1)) / (2 mu^2 A^2)  (< 0)
struct EigenBracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct EigenResult {
  double lambda = 0.0;
  /// |W_{1,xi/2}(2/(mu^2 A))| at the returned root.
  double residual = 0.0;
  int iterations = 0;
  EigenBracket bracket;
};

struct EigenOptions {
  double tol = 1e-13;  ///< absolute tolerance on lambda
  int scan_nodes = 64;
  int max_scan_nodes = 1024;
  double max_residual = 1e-9;
};

EigenBracket eigen_bracket(const ModelParams& params);

/// The function whose largest nonpositive root is the dominant eigenvalue:
/// lambda -> W_{1, xi(lambda)/2}(2/(mu^2 A)).
double eigen_equation(double lambda, const ModelParams& params);

/// Scan the bracket for sign changes of eigen_equation, then polish the one
/// root found. Throws Error(bracket_failure) when none is found and
/// AmbiguousRootError when more than one is.
EigenResult dominant_eigenvalue(const ModelParams& params, const EigenOptions& options = {});

/// Un-normalized eigenfunction phi(x) = (mu^2 x / 2) e^{1/(mu^2 x)} W_{1,xi/2}(2/(mu^2 x)),
/// for 0 < x <= A.
double eigenfunction(double x, const SpectralIndex& se, const ModelParams& params);

/// True iff the dominant eigenvalue strictly increases along the (strictly
/// increasing) threshold grid.
bool eigenvalue_monotonicity_check(double mu, std::span<const double> A_grid, const EigenOptions& options = {});

}  // namespace qsdsr
