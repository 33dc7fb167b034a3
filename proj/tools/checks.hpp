// Numerical checks shared by the validate command and the acceptance runner.
// Each check records a measured value, the threshold it is held to and a verdict.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsdsr_tools {

enum class Verdict { pass, fail, skipped };

struct Check {
  std::string suite;
  std::string name;
  Verdict verdict = Verdict::fail;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

const char* to_string(Verdict v);
bool all_passed(const std::vector<Check>& checks);

struct McSettings {
  std::int64_t paths = 200000;
  double dt = 1e-3;
  double horizon = 0.0;  // 0: use the threshold A
  std::uint64_t seed = 20240601;
};

// Reference table (mu = 1).
std::vector<Check> table1_eigen_checks(double tol, double eigen_tol = 1e-13);
std::vector<Check> table1_approx_checks(double tol);
std::vector<Check> table1_ordering_checks(double eigen_tol = 1e-13);

// Exact law at one (mu, A).
std::vector<Check> law_checks(double mu, double A, double eigen_tol = 1e-13);
std::vector<Check> moment_checks(double mu, double A, double eigen_tol = 1e-13);

std::vector<Check> index_derivative_checks();
std::vector<Check> expansion_order_checks();
std::vector<Check> identity_checks(double mu, double A, double eigen_tol = 1e-13);

std::vector<Check> oracle_checks(double mu, double A, int n_grid, double eigen_tol = 1e-13);
std::vector<Check> monte_carlo_checks(double mu, double A, const McSettings& settings, double eigen_tol = 1e-13);

// Report entry for a suite that was not run.
Check skipped_check(const std::string& suite, const std::string& reason);

}  // namespace qsdsr_tools
