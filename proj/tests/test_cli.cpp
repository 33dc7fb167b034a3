// Runs the qsdsr executable as a subprocess and inspects its output.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "doctest.h"

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const std::string err_path = "cli_test_stderr.txt";
  const std::string cmd = std::string("\"") + QSDSR_CLI_PATH + "\" " + args + " 2>" + err_path;
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::remove(err_path.c_str());
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and usage errors") {
    CHECK(run("--help").status == 0);
    CHECK(run("").status == 64);
    CHECK(run("bogus").status == 64);
    CHECK(run("pdf --mu 0 --A 20").status == 64);
    CHECK(run("pdf --A 20 --grid 1").status == 64);
    CHECK(run("approx --A 20 --order 4").status == 64);
    CHECK(run("pdf --A 20 --format xml").status == 64);
    CHECK(run("validate --skip everything").status == 64);
  }

  TEST_CASE("table1 rows") {
    const Run r = run("table1");
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "A,neg_lambda,neg_lambda_1,neg_lambda_2,neg_lambda_3");
    CHECK(rows[1] == "20,0.058856148622,0.050000000000,0.059819055496,0.058817735494");
    CHECK(rows[5] == "100,0.010563106075,0.010000000000,0.010577520296,0.010562921283");
    CHECK(rows[8].rfind("10000,0.000100139278,0.000100000000,", 0) == 0);
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("table1 json and mismatch exit code") {
    const Run r = run("table1 --A 20 --A 50 --format json");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "table1");
    CHECK(j["pass"] == true);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["neg_lambda"].get<double>() == 0.058856148622);
    CHECK(j["rows"][1]["A"].get<double>() == 50.0);
    CHECK(j["rows"][1]["abs_error"].get<double>() < 1e-10);

    const Run strict = run("table1 --A 20 --tol 0");
    CHECK(strict.status == 2);
    CHECK(strict.err.find("mismatch") != std::string::npos);

    const Run unknown = run("table1 --A 7");
    CHECK(unknown.status == 0);
    CHECK(unknown.err.find("warning") != std::string::npos);
  }

  TEST_CASE("pdf and cdf tables") {
    const Run pdf = run("pdf --mu 1 --A 20");
    REQUIRE(pdf.status == 0);
    const auto rows = lines(pdf.out);
    REQUIRE(rows.size() == 1001);
    CHECK(rows[0] == "x,q");
    CHECK(rows[1] == "0,0");
    CHECK(rows[1000] == "20,0");
    CHECK(pdf.out.find('\r') == std::string::npos);
    CHECK(run("pdf --mu 1 --A 20").out == pdf.out);

    const Run cdf = run("cdf --mu 1 --A 20 --grid 5 --format json");
    REQUIRE(cdf.status == 0);
    const auto j = nlohmann::json::parse(cdf.out);
    REQUIRE(j["rows"].size() == 5);
    CHECK(j["rows"][0][1].get<double>() == 0.0);
    CHECK(j["rows"][4][1].get<double>() == 1.0);
    const double mid = j["rows"][2][1].get<double>();
    CHECK(mid > 0.5);
    CHECK(mid < 1.0);
  }

  TEST_CASE("csv values round-trip") {
    const Run r = run("pdf --mu 1 --A 20 --grid 5");
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 6);
    REQUIRE(rows[2].rfind("5,", 0) == 0);
    // 17 significant digits, so the value survives a text round trip.
    CHECK(rows[2].size() == std::string("5,0.0").size() + 17);
    CHECK(std::abs(std::strtod(rows[2].c_str() + 2, nullptr) - 0.055010444396763657532) < 1e-14);
  }

  TEST_CASE("output file") {
    const std::string path = "cli_test_out.csv";
    const Run r = run("pdf --A 20 --grid 3 --out " + path);
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x,q\n0,0\n10,0.010971168619756789\n20,0\n");
    std::remove(path.c_str());
  }

  TEST_CASE("approx columns") {
    const Run full = run("approx --mu 1 --A 20 --grid 3 --format json");
    REQUIRE(full.status == 0);
    const auto j = nlohmann::json::parse(full.out);
    CHECK(j["columns"].size() == 8);
    CHECK(j["max_abs_error"]["3"].get<double>() < j["max_abs_error"]["1"].get<double>());

    const Run one = run("approx --mu 1 --A 20 --grid 3 --order 3");
    REQUIRE(one.status == 0);
    CHECK(lines(one.out)[0] == "x,q,q3,err3");

    const Run missing = run("approx --mu 1 --A 3 --order 2 --grid 3");
    CHECK(missing.status == 0);
    CHECK(lines(missing.out)[0] == "x,q");
    CHECK(missing.err.find("order-2 approximation omitted") != std::string::npos);
  }

  TEST_CASE("validate without simulation") {
    const Run r = run("validate --mu 1 --A 20 --skip mc");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() > 20);
    for (const auto& c : j["checks"]) {
      if (c["suite"] == "mc") CHECK(c["verdict"] == "skipped");
    }
  }
}
