// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Optional arguments select criteria by number, e.g. `qsdsr_acceptance 1 2 3`.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "api.hpp"
#include "checks.hpp"

namespace {

using namespace qsdsr_tools;

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds
  std::function<std::vector<Check>()> run;
};

std::vector<Check> grid_of_laws(bool moments) {
  std::vector<Check> out;
  for (double mu : {0.5, 1.0, 1.5}) {
    for (double A : {5.0, 20.0, 100.0}) {
      std::vector<Check> more = moments ? moment_checks(mu, A) : law_checks(mu, A);
      out.insert(out.end(), more.begin(), more.end());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "reference eigenvalues within 1e-10", 10.0, [] { return table1_eigen_checks(1e-10); }},
      {2, "reference approximations within 1e-9", 5.0, [] { return table1_approx_checks(1e-9); }},
      {3, "approximation accuracy ordering", 1e9, [] { return table1_ordering_checks(); }},
      {4, "exact-law properties on the 3x3 grid", 60.0, [] { return grid_of_laws(false); }},
      {5, "moment recurrence, closed forms and quadrature", 1e9, [] { return grid_of_laws(true); }},
      {6, "index-derivative identities", 1e9, [] { return index_derivative_checks(); }},
      {7, "expansion truncation order", 1e9, [] { return expansion_order_checks(); }},
      {8, "Sturm-Liouville oracle agreement", 60.0, [] { return oracle_checks(1.0, 20.0, 20000); }},
      {9, "Monte Carlo agreement", 300.0, [] { return monte_carlo_checks(1.0, 20.0, McSettings{}); }},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all = true;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    std::string error;
    try {
      checks = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit;
    const bool pass = error.empty() && all_passed(checks) && in_time;
    all = all && pass;

    std::printf("criterion %d: %s  %s  (%zu checks, %.2f s)\n", c.id, pass ? "PASS" : "FAIL", c.title,
                checks.size(), seconds);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!in_time) std::printf("    over the %.0f s time limit\n", c.time_limit);
    for (const Check& k : checks) {
      if (k.verdict == Verdict::fail) {
        std::printf("    failed %s: value %.6g, threshold %.6g %s\n", k.name.c_str(), k.value, k.threshold,
                    k.detail.c_str());
      }
    }
    std::fflush(stdout);
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
