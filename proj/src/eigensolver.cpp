#include "qsdsr/eigensolver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qsdsr/error.hpp"
#include "qsdsr/specfun.hpp"

namespace qsdsr {
namespace {

struct Node {
  double lambda;
  double g;
};

// Bisection down to a narrow interval, then secant steps kept inside the
// current bracket.
double polish_root(const ModelParams& params, Node left, Node right, double tol, int& iterations) {
  const double width0 = right.lambda - left.lambda;
  while (right.lambda - left.lambda > 1e-6 * width0 && right.lambda - left.lambda > tol) {
    const double mid = 0.5 * (left.lambda + right.lambda);
    const Node m{mid, eigen_equation(mid, params)};
    ++iterations;
    if (m.g == 0.0) return mid;
    ((m.g > 0.0) == (left.g > 0.0) ? left : right) = m;
  }
  Node a = left;
  Node b = right;
  for (int it = 0; it < 200; ++it) {
    if (b.lambda - a.lambda <= tol) break;
    double next = b.lambda - b.g * (b.lambda - a.lambda) / (b.g - a.g);
    if (!(next > a.lambda && next < b.lambda)) next = 0.5 * (a.lambda + b.lambda);
    const Node m{next, eigen_equation(next, params)};
    ++iterations;
    if (m.g == 0.0) return next;
    const double step = std::min(next - a.lambda, b.lambda - next);
    ((m.g > 0.0) == (a.g > 0.0) ? a : b) = m;
    if (step <= tol) break;
  }
  return std::abs(a.g) < std::abs(b.g) ? a.lambda : b.lambda;
}

std::vector<std::pair<Node, Node>> scan(const ModelParams& params, const EigenBracket& br, int nodes,
                                        std::vector<Node>& values) {
  values.clear();
  for (int i = 0; i <= nodes; ++i) {
    const double lam = i == nodes ? br.hi : br.lo + (br.hi - br.lo) * i / nodes;
    values.push_back({lam, eigen_equation(lam, params)});
  }
  std::vector<std::pair<Node, Node>> changes;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const Node& l = values[i];
    const Node& r = values[i + 1];
    if (l.g == 0.0) {
      changes.push_back({l, l});
    } else if ((l.g > 0.0) != (r.g > 0.0) && r.g != 0.0) {
      changes.push_back({l, r});
    }
  }
  if (values.back().g == 0.0) changes.push_back({values.back(), values.back()});
  return changes;
}

}  // namespace

EigenBracket eigen_bracket(const ModelParams& params) {
  const double mu2 = params.mu2();
  const double A = params.A();
  const double root = std::sqrt(4.0 * mu2 * A + 1.0);
  const double denom = 2.0 * mu2 * A * A;
  return {-1.0 / A - (1.0 + root) / denom, -1.0 / A - (1.0 - root) / denom};
}

double eigen_equation(double lambda, const ModelParams& params) {
  const SpectralIndex se = SpectralIndex::from_lambda(lambda, params);
  return detail::whittaker_w_general(1, se.half_xi(), params.whittaker_arg(params.A()));
}

EigenResult dominant_eigenvalue(const ModelParams& params, const EigenOptions& options) {
  if (!(options.tol > 0.0)) fail(ErrorCode::invalid_argument, "eigenvalue tolerance must be positive");
  EigenResult result;
  result.bracket = eigen_bracket(params);

  std::vector<Node> values;
  std::vector<std::pair<Node, Node>> changes;
  for (int nodes = options.scan_nodes; nodes <= options.max_scan_nodes; nodes *= 2) {
    changes = scan(params, result.bracket, nodes, values);
    result.iterations += nodes + 1;
    if (!changes.empty()) break;
  }
  if (changes.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change of W_{1,xi/2}(2/(mu^2 A)) in [" << result.bracket.lo << ", " << result.bracket.hi
       << "]: g(lo) = " << values.front().g << ", g(hi) = " << values.back().g;
    fail(ErrorCode::bracket_failure, os.str());
  }

  std::vector<double> roots;
  for (const auto& [l, r] : changes) {
    roots.push_back(l.lambda == r.lambda ? l.lambda : polish_root(params, l, r, options.tol, result.iterations));
  }
  if (roots.size() > 1) {
    std::ostringstream os;
    os.precision(17);
    os << roots.size() << " sign changes in the eigenvalue bracket; candidates:";
    for (double r : roots) os << ' ' << r;
    throw AmbiguousRootError(os.str(), roots);
  }

  result.lambda = roots.front();
  result.residual = std::abs(eigen_equation(result.lambda, params));
  if (result.residual > options.max_residual) {
    std::ostringstream os;
    os << "eigenvalue residual " << result.residual << " exceeds " << options.max_residual;
    fail(ErrorCode::convergence, os.str());
  }
  return result;
}

double eigenfunction(double x, const SpectralIndex& se, const ModelParams& params) {
  if (!(x > 0.0) || x > params.A()) {
    std::ostringstream os;
    os << "eigenfunction requires 0 < x <= A, got " << x;
    fail(ErrorCode::domain, os.str());
  }
  const double z = params.whittaker_arg(x);
  // e^{1/(mu^2 x)} W(z) = e^{z/2} W(z)
  return params.mu2() * x / 2.0 * detail::whittaker_w_general(1, se.half_xi(), z, true);
}

bool eigenvalue_monotonicity_check(double mu, std::span<const double> A_grid, const EigenOptions& options) {
  double previous = 0.0;
  for (std::size_t i = 0; i < A_grid.size(); ++i) {
    if (i > 0 && !(A_grid[i] > A_grid[i - 1])) {
      fail(ErrorCode::invalid_argument, "threshold grid must be strictly increasing");
    }
    const double lambda = dominant_eigenvalue(ModelParams(mu, A_grid[i]), options).lambda;
    if (i > 0 && !(lambda > previous)) return false;
    previous = lambda;
  }
  return true;
}

}  // namespace qsdsr
