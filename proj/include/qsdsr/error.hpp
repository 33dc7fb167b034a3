#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qsdsr {

/// Failure categories shared by the C++ surface and the C API status codes.
enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  convergence = 3,
  bracket_failure = 4,
  ambiguous_root = 5,
  threshold_too_small = 6,
  insufficient_horizon = 7,
  overflow = 8,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the eigenvalue scan finds more than one sign change; carries
/// every polished candidate so callers can inspect them.
class AmbiguousRootError : public Error {
 public:
  AmbiguousRootError(const std::string& what, std::vector<double> candidates)
      : Error(ErrorCode::ambiguous_root, what), candidates_(std::move(candidates)) {}
  const std::vector<double>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<double> candidates_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qsdsr
