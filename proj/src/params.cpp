#include "qsdsr/params.hpp"

#include <cmath>
#include <sstream>

#include "qsdsr/error.hpp"

namespace qsdsr {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::convergence: return "convergence failure";
    case ErrorCode::bracket_failure: return "no root in bracket";
    case ErrorCode::ambiguous_root: return "ambiguous root";
    case ErrorCode::threshold_too_small: return "threshold too small";
    case ErrorCode::insufficient_horizon: return "insufficient horizon";
    case ErrorCode::overflow: return "overflow";
  }
  return "unknown error";
}

ModelParams::ModelParams(double mu, double A) : mu_(mu), A_(A) {
  if (!std::isfinite(mu) || mu == 0.0) {
    std::ostringstream os;
    os << "drift mu must be finite and nonzero, got " << mu;
    fail(ErrorCode::invalid_argument, os.str());
  }
  if (!std::isfinite(A) || !(A > 0.0)) {
    std::ostringstream os;
    os << "threshold A must be finite and positive, got " << A;
    fail(ErrorCode::invalid_argument, os.str());
  }
}

SpectralIndex SpectralIndex::from_lambda(double lambda, const ModelParams& params) {
  if (!std::isfinite(lambda) || lambda > 0.0) {
    std::ostringstream os;
    os << "eigenvalue must be finite and nonpositive, got " << lambda;
    fail(ErrorCode::invalid_argument, os.str());
  }
  SpectralIndex se;
  se.lambda = lambda;
  se.xi_squared = 1.0 + 8.0 * lambda / params.mu2();
  se.xi = se.xi_squared >= 0.0 ? std::complex<double>(std::sqrt(se.xi_squared), 0.0)
                               : std::complex<double>(0.0, std::sqrt(-se.xi_squared));
  return se;
}

double lambda_from_xi_squared(double xi_squared, const ModelParams& params) noexcept {
  return params.mu2() * (xi_squared - 1.0) / 8.0;
}

}  // namespace qsdsr
