// Thin C++ conveniences over the C interface, shared by the command-line tools.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsdsr/qsdsr.h"

namespace qsdsr_tools {

class ApiError : public std::runtime_error {
 public:
  ApiError(qsdsr_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  qsdsr_status status() const { return status_; }

 private:
  qsdsr_status status_;
};

inline void check(qsdsr_status status) {
  if (status != QSDSR_OK) {
    throw ApiError(status, std::string(qsdsr_status_string(status)) + ": " + qsdsr_last_error());
  }
}

struct SolutionDeleter {
  void operator()(qsdsr_solution* p) const { qsdsr_solution_destroy(p); }
};
struct ApproxDeleter {
  void operator()(qsdsr_approx* p) const { qsdsr_approx_destroy(p); }
};
struct GridDeleter {
  void operator()(qsdsr_grid_solution* p) const { qsdsr_grid_destroy(p); }
};
struct EmpiricalDeleter {
  void operator()(qsdsr_empirical* p) const { qsdsr_empirical_destroy(p); }
};

class Solution {
 public:
  Solution(double mu, double A, double tol = 1e-13) : mu_(mu), A_(A) {
    qsdsr_solution* raw = nullptr;
    check(qsdsr_solution_create(mu, A, tol, &raw));
    handle_.reset(raw);
  }
  const qsdsr_solution* get() const { return handle_.get(); }
  double mu() const { return mu_; }
  double A() const { return A_; }

  double lambda() const {
    double v = 0.0;
    check(qsdsr_solution_lambda(get(), &v));
    return v;
  }
  std::vector<double> pdf(std::span<const double> x) const { return eval(qsdsr_pdf, x); }
  std::vector<double> log_pdf(std::span<const double> x) const { return eval(qsdsr_log_pdf, x); }
  std::vector<double> cdf(std::span<const double> x) const { return eval(qsdsr_cdf, x); }
  double pdf(double x) const { return pdf(std::span<const double>(&x, 1))[0]; }
  double cdf(double x) const { return cdf(std::span<const double>(&x, 1))[0]; }

 private:
  template <class Fn>
  std::vector<double> eval(Fn fn, std::span<const double> x) const {
    std::vector<double> out(x.size());
    check(fn(get(), x.data(), x.size(), out.data()));
    return out;
  }

  double mu_;
  double A_;
  std::unique_ptr<qsdsr_solution, SolutionDeleter> handle_;
};

class Approx {
 public:
  Approx(int order, double mu, double A) {
    qsdsr_approx* raw = nullptr;
    check(qsdsr_approx_create(order, mu, A, &raw));
    handle_.reset(raw);
  }
  std::vector<double> pdf(std::span<const double> x) const {
    std::vector<double> out(x.size());
    check(qsdsr_approx_pdf(handle_.get(), x.data(), x.size(), out.data()));
    return out;
  }

 private:
  std::unique_ptr<qsdsr_approx, ApproxDeleter> handle_;
};

using GridHandle = std::unique_ptr<qsdsr_grid_solution, GridDeleter>;
using EmpiricalHandle = std::unique_ptr<qsdsr_empirical, EmpiricalDeleter>;

// n equally spaced points from lo to hi inclusive (n >= 2).
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  x.back() = hi;
  return x;
}

}  // namespace qsdsr_tools
