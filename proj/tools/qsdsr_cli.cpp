// qsdsr: command-line front end over the C interface.
//
// Exit codes: 0 success, 1 computational failure, 2 validation mismatch, 64 usage error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "api.hpp"
#include "checks.hpp"
#include "json.hpp"
#include "table1_data.hpp"

namespace {

using nlohmann::json;
using namespace qsdsr_tools;

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<double> mu;
  std::vector<double> A;
  int order = 0;
  double tol = -1.0;  // per-command default when not given
  int grid = 0;
  std::optional<double> xmin;
  std::optional<double> xmax;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 20240601;
  std::int64_t paths = 200000;
  double dt = 1e-3;
  double horizon = 0.0;
  std::vector<std::string> skip;
};

std::string fmt17(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string fixed12(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 12);
  return std::string(buf, r.ptr);
}

// Value as it appears with 12 decimals, so JSON and CSV agree.
double rounded12(double v) {
  const std::string s = fixed12(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write to output failed");
  }

 private:
  std::ofstream file_;
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

double single(const std::vector<double>& v, double fallback, const char* flag) {
  if (v.empty()) return fallback;
  if (v.size() > 1) throw UsageError(std::string(flag) + " takes a single value for this command");
  return v.front();
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << fmt17(row[j]);
    os << '\n';
  }
}

int cmd_table1(const RunConfig& cfg) {
  const double mu = single(cfg.mu, kTable1Mu, "--mu");
  const double tol = cfg.tol < 0.0 ? 1e-10 : cfg.tol;
  std::vector<double> thresholds = cfg.A;
  if (thresholds.empty()) {
    for (const Table1Row& row : kTable1) thresholds.push_back(row.A);
  }

  struct Row {
    double A;
    double neg_lambda;
    std::optional<double> approx[3];
    const Table1Row* reference;
  };
  std::vector<Row> rows;
  std::vector<std::string> warnings;
  std::vector<std::string> mismatches;
  for (double A : thresholds) {
    Row row{A, -Solution(mu, A, 1e-13).lambda(), {}, find_table1_row(mu, A)};
    for (int k = 1; k <= 3; ++k) {
      double v = 0.0;
      const qsdsr_status st = qsdsr_lambda_approx(k, mu, A, &v);
      if (st == QSDSR_THRESHOLD_TOO_SMALL) {
        warnings.push_back("order-" + std::to_string(k) + " approximation omitted at A=" + fmt17(A) + ": " +
                           qsdsr_last_error());
        continue;
      }
      check(st);
      row.approx[k - 1] = -v;
    }
    if (row.reference == nullptr) {
      warnings.push_back("no reference value for mu=" + fmt17(mu) + ", A=" + fmt17(A));
    } else if (!(std::abs(row.neg_lambda - row.reference->neg_lambda) <= tol)) {
      mismatches.push_back("A=" + fmt17(A) + ": computed " + fmt17(row.neg_lambda) + ", reference " +
                           fixed12(row.reference->neg_lambda) + ", |diff| " +
                           fmt17(std::abs(row.neg_lambda - row.reference->neg_lambda)) + " > " + fmt17(tol));
    }
    rows.push_back(row);
  }

  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "json") {
    json doc;
    doc["command"] = "table1";
    doc["mu"] = mu;
    doc["tolerance"] = tol;
    doc["columns"] = {"A", "neg_lambda", "neg_lambda_1", "neg_lambda_2", "neg_lambda_3"};
    json jrows = json::array();
    for (const Row& r : rows) {
      json jr;
      jr["A"] = r.A;
      jr["neg_lambda"] = rounded12(r.neg_lambda);
      for (int k = 0; k < 3; ++k) {
        const std::string key = "neg_lambda_" + std::to_string(k + 1);
        jr[key] = r.approx[k] ? json(rounded12(*r.approx[k])) : json(nullptr);
      }
      if (r.reference) {
        jr["reference"] = r.reference->neg_lambda;
        jr["abs_error"] = std::abs(r.neg_lambda - r.reference->neg_lambda);
        jr["match"] = std::abs(r.neg_lambda - r.reference->neg_lambda) <= tol;
      } else {
        jr["reference"] = nullptr;
      }
      jrows.push_back(jr);
    }
    doc["rows"] = jrows;
    doc["warnings"] = warnings;
    doc["pass"] = mismatches.empty();
    os << doc.dump(2) << '\n';
  } else {
    os << "A,neg_lambda,neg_lambda_1,neg_lambda_2,neg_lambda_3\n";
    for (const Row& r : rows) {
      os << fmt17(r.A) << ',' << fixed12(r.neg_lambda);
      for (const auto& a : r.approx) os << ',' << (a ? fixed12(*a) : std::string());
      os << '\n';
    }
  }
  out.finish();
  for (const std::string& w : warnings) warn(w);
  for (const std::string& m : mismatches) std::cerr << "mismatch: " << m << '\n';
  return mismatches.empty() ? kExitOk : kExitMismatch;
}

enum class GridKind { pdf, cdf, approx };

int cmd_grid(const RunConfig& cfg, GridKind kind) {
  const double mu = single(cfg.mu, 1.0, "--mu");
  const double A = single(cfg.A, 20.0, "--A");
  if (!(mu > 0.0) || !(A > 0.0)) throw UsageError("--mu and --A must be positive");
  const double lo = cfg.xmin.value_or(0.0);
  const double hi = cfg.xmax.value_or(A);
  if (!(lo >= 0.0 && lo < hi && hi <= A)) throw UsageError("need 0 <= xmin < xmax <= A");
  const int n = cfg.grid > 0 ? cfg.grid : 1000;
  const double tol = cfg.tol < 0.0 ? 1e-13 : cfg.tol;

  const Solution sol(mu, A, tol);
  const std::vector<double> x = linspace(lo, hi, static_cast<std::size_t>(n));
  std::vector<std::string> header{"x"};
  std::vector<std::vector<double>> columns{x};
  std::vector<std::string> warnings;
  json max_error = json::object();

  if (kind == GridKind::cdf) {
    header.push_back("Q");
    columns.push_back(sol.cdf(x));
  } else {
    header.push_back("q");
    columns.push_back(sol.pdf(x));
  }
  if (kind == GridKind::approx) {
    std::vector<std::vector<double>> errors;
    std::vector<std::string> error_header;
    for (int k = 1; k <= 3; ++k) {
      if (cfg.order != 0 && cfg.order != k) continue;
      std::optional<Approx> approx;
      try {
        approx.emplace(k, mu, A);
      } catch (const ApiError& e) {
        if (e.status() != QSDSR_THRESHOLD_TOO_SMALL) throw;
        warnings.push_back("order-" + std::to_string(k) + " approximation omitted: " + e.what());
        continue;
      }
      std::vector<double> qk = approx->pdf(x);
      std::vector<double> err(x.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        err[i] = std::abs(columns[1][i] - qk[i]);
        worst = std::max(worst, err[i]);
      }
      max_error[std::to_string(k)] = worst;
      header.push_back("q" + std::to_string(k));
      columns.push_back(std::move(qk));
      error_header.push_back("err" + std::to_string(k));
      errors.push_back(std::move(err));
    }
    header.insert(header.end(), error_header.begin(), error_header.end());
    for (auto& e : errors) columns.push_back(std::move(e));
  }

  std::vector<std::vector<double>> rows(x.size(), std::vector<double>(columns.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) rows[i][j] = columns[j][i];
  }

  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "json") {
    json doc;
    doc["command"] = kind == GridKind::pdf ? "pdf" : kind == GridKind::cdf ? "cdf" : "approx";
    doc["mu"] = mu;
    doc["A"] = A;
    doc["lambda"] = sol.lambda();
    doc["columns"] = header;
    doc["rows"] = rows;
    if (kind == GridKind::approx) doc["max_abs_error"] = max_error;
    doc["warnings"] = warnings;
    os << doc.dump() << '\n';
  } else {
    write_csv(os, header, rows);
  }
  out.finish();
  for (const std::string& w : warnings) warn(w);
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg) {
  const std::vector<double> mus = cfg.mu.empty() ? std::vector<double>{0.5, 1.0, 1.5} : cfg.mu;
  const std::vector<double> As = cfg.A.empty() ? std::vector<double>{5.0, 20.0, 100.0} : cfg.A;
  const double tol = cfg.tol < 0.0 ? 1e-13 : cfg.tol;
  const int n_grid = cfg.grid > 0 ? cfg.grid : 20000;
  auto skipped = [&](const std::string& s) { return std::find(cfg.skip.begin(), cfg.skip.end(), s) != cfg.skip.end(); };

  std::vector<Check> checks;
  auto add = [&](std::vector<Check> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  auto run_suite = [&](const std::string& suite, auto&& body) {
    if (skipped(suite)) {
      checks.push_back(skipped_check(suite, "skipped on request"));
    } else {
      body();
    }
  };

  run_suite("normalization", [&] {
    for (double mu : mus) {
      for (double A : As) add(law_checks(mu, A, tol));
    }
  });
  run_suite("moments", [&] {
    for (double mu : mus) {
      for (double A : As) add(moment_checks(mu, A, tol));
    }
  });
  run_suite("identities", [&] {
    add(index_derivative_checks());
    add(expansion_order_checks());
    for (double mu : mus) {
      for (double A : As) add(identity_checks(mu, A, tol));
    }
  });
  run_suite("oracle", [&] {
    for (double mu : mus) {
      for (double A : As) add(oracle_checks(mu, A, n_grid, tol));
    }
  });
  run_suite("mc", [&] {
    McSettings mc;
    mc.paths = cfg.paths;
    mc.dt = cfg.dt;
    mc.horizon = cfg.horizon;
    mc.seed = cfg.seed;
    add(monte_carlo_checks(cfg.mu.empty() ? 1.0 : cfg.mu.front(), cfg.A.empty() ? 20.0 : cfg.A.front(), mc, tol));
  });

  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"skipped", 0}};
  for (const Check& c : checks) ++counts[to_string(c.verdict)];
  const bool pass = all_passed(checks);

  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "csv") {
    os << "suite,name,verdict,value,threshold,detail\n";
    for (const Check& c : checks) {
      std::string detail = c.detail;
      std::replace(detail.begin(), detail.end(), ',', ';');
      os << c.suite << ',' << '"' << c.name << '"' << ',' << to_string(c.verdict) << ',' << fmt17(c.value) << ','
         << fmt17(c.threshold) << ',' << detail << '\n';
    }
  } else {
    json doc;
    doc["command"] = "validate";
    doc["eigen_tolerance"] = tol;
    json jchecks = json::array();
    for (const Check& c : checks) {
      jchecks.push_back({{"suite", c.suite},
                         {"name", c.name},
                         {"verdict", to_string(c.verdict)},
                         {"value", c.value},
                         {"threshold", c.threshold},
                         {"detail", c.detail}});
    }
    doc["checks"] = jchecks;
    doc["summary"] = counts;
    doc["pass"] = pass;
    os << doc.dump(2) << '\n';
  }
  out.finish();
  for (const Check& c : checks) {
    if (c.verdict == Verdict::fail) {
      std::cerr << "failed: " << c.suite << '/' << c.name << " value " << fmt17(c.value) << " threshold "
                << fmt17(c.threshold) << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    }
  }
  return pass ? kExitOk : kExitMismatch;
}

void add_model_options(CLI::App* sub, RunConfig& cfg, bool multi_mu, bool multi_A) {
  auto* mu = sub->add_option("--mu", cfg.mu, multi_mu ? "Diffusion coefficient(s), repeatable" : "Diffusion coefficient")
                 ->check(CLI::PositiveNumber);
  auto* A = sub->add_option("--A", cfg.A, multi_A ? "Threshold(s), repeatable" : "Threshold")->check(CLI::PositiveNumber);
  if (!multi_mu) mu->expected(1);
  if (!multi_A) A->expected(1);
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "Output file (default: standard output)");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-stationary distribution of the killed Generalized Shiryaev-Roberts diffusion", "qsdsr"};
  app.set_version_flag("--version", qsdsr_version());
  app.require_subcommand(1, 1);

  RunConfig cfg;

  auto* table1 = app.add_subcommand("table1", "Dominant eigenvalue and its three approximations against reference values");
  add_model_options(table1, cfg, false, true);
  table1->add_option("--tol", cfg.tol, "Absolute tolerance on -lambda (default 1e-10)")->check(CLI::NonNegativeNumber);
  add_output_options(table1, cfg);

  auto grid_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_model_options(sub, cfg, false, false);
    sub->add_option("--grid", cfg.grid, "Number of grid points (default 1000)")->check(CLI::Range(2, 10000000));
    sub->add_option("--xmin", cfg.xmin, "Left end of the grid (default 0)");
    sub->add_option("--xmax", cfg.xmax, "Right end of the grid (default A)");
    sub->add_option("--tol", cfg.tol, "Eigenvalue tolerance (default 1e-13)")->check(CLI::PositiveNumber);
    add_output_options(sub, cfg);
    return sub;
  };
  auto* pdf = grid_command("pdf", "Tabulate the density q(x)");
  auto* cdf = grid_command("cdf", "Tabulate the distribution function Q(x)");
  auto* approx = grid_command("approx", "Tabulate q(x) with its order-1/2/3 approximations and absolute errors");
  approx->add_option("--order", cfg.order, "Restrict to one approximation order")->check(CLI::IsMember({1, 2, 3}));

  auto* validate = app.add_subcommand("validate", "Run normalization, identity, oracle and Monte Carlo checks");
  add_model_options(validate, cfg, true, true);
  validate->add_option("--tol", cfg.tol, "Eigenvalue tolerance (default 1e-13)")->check(CLI::PositiveNumber);
  validate->add_option("--grid", cfg.grid, "Sturm-Liouville grid size (default 20000)")->check(CLI::Range(100, 10000000));
  validate->add_option("--seed", cfg.seed, "Monte Carlo seed");
  validate->add_option("--paths", cfg.paths, "Monte Carlo paths per headstart")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  validate->add_option("--dt", cfg.dt, "Euler step")->check(CLI::PositiveNumber);
  validate->add_option("--horizon", cfg.horizon, "Simulation horizon (default A)")->check(CLI::PositiveNumber);
  validate->add_option("--skip", cfg.skip, "Suites to skip, repeatable")
      ->check(CLI::IsMember({"normalization", "moments", "identities", "oracle", "mc"}));
  add_output_options(validate, cfg);
  validate->callback([&] {
    if (!validate->count("--format")) cfg.format = "json";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (table1->parsed()) return cmd_table1(cfg);
    if (pdf->parsed()) return cmd_grid(cfg, GridKind::pdf);
    if (cdf->parsed()) return cmd_grid(cfg, GridKind::cdf);
    if (approx->parsed()) return cmd_grid(cfg, GridKind::approx);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ApiError& e) {
    if (e.status() == QSDSR_INVALID_ARGUMENT) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitUsage;
}
