#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <bit>
#include <sstream>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "qsdsr/error.hpp"
#include "qsdsr/oracle.hpp"

namespace qsdsr {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** (Blackman and Vigna); state filled from splitmix64 of the seed.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  explicit Xoshiro256(std::uint64_t seed) {
    for (auto& w : s_) {
      seed += 0x9e3779b97f4a7c15ULL;
      w = splitmix64(seed);
    }
  }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

 private:
  std::uint64_t s_[4];
};

struct PathOutcome {
  double value = 0.0;  // final state; negative means killed
  double death_time = 0.0;
};

PathOutcome run_path(const ModelParams& params, const MonteCarloOptions& opt, std::int64_t steps,
                     std::uint64_t path_index) {
  Xoshiro256 engine(opt.seed ^ splitmix64(path_index));
  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> uniform;
  const double A = params.A();
  const double mu = params.mu();
  const double mu2 = params.mu2();
  const double dt = opt.dt;
  const double sqrt_dt = std::sqrt(dt);
  double r = opt.headstart;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double next = std::max(0.0, r + dt + mu * r * sqrt_dt * normal(engine));
    if (next >= A) return {-1.0, (k + 1) * dt};
    // Bridge crossing chance, only drawn when it is not negligible (exponent < 40).
    const double gap = (A - r) * (A - next);
    const double spread = mu2 * r * r * dt;
    if (gap < 20.0 * spread && uniform(engine) < std::exp(-2.0 * gap / spread)) return {-1.0, (k + 1) * dt};
    r = next;
  }
  return {r, 0.0};
}

}  // namespace

int default_thread_count() {
  if (const char* env = std::getenv("QSD_SR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EmpiricalLaw simulate_killed_sr(const ModelParams& params, const MonteCarloOptions& opt) {
  const double A = params.A();
  if (!(opt.headstart >= 0.0) || !(opt.headstart < A)) {
    std::ostringstream os;
    os << "headstart must lie in [0, A), got " << opt.headstart;
    fail(ErrorCode::invalid_argument, os.str());
  }
  if (!(opt.dt > 0.0) || !(opt.horizon >= 10.0 * opt.dt)) {
    fail(ErrorCode::invalid_argument, "need dt > 0 and a horizon of at least 10 steps");
  }
  if (opt.n_paths <= 0 || opt.n_bins <= 0) fail(ErrorCode::invalid_argument, "need positive path and bin counts");
  for (double t : opt.checkpoints) {
    if (!(t > 0.0) || t > opt.horizon) fail(ErrorCode::invalid_argument, "checkpoints must lie in (0, horizon]");
  }

  const auto steps = static_cast<std::int64_t>(std::llround(opt.horizon / opt.dt));
  std::vector<PathOutcome> outcomes(static_cast<std::size_t>(opt.n_paths));
  const int threads = std::max(1, std::min<int>(opt.threads > 0 ? opt.threads : default_thread_count(),
                                                static_cast<int>(std::min<std::int64_t>(opt.n_paths, 1024))));
  auto worker = [&](int id) {
    for (std::int64_t p = id; p < opt.n_paths; p += threads) {
      outcomes[static_cast<std::size_t>(p)] = run_path(params, opt, steps, static_cast<std::uint64_t>(p));
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int id = 0; id < threads; ++id) pool.emplace_back(worker, id);
  }

  EmpiricalLaw law;
  law.n_paths_total = opt.n_paths;
  law.seed = opt.seed;
  law.headstart = opt.headstart;
  law.horizon = steps * opt.dt;
  law.dt = opt.dt;
  law.checkpoint_times = opt.checkpoints;
  law.checkpoint_survivors.assign(opt.checkpoints.size(), 0);
  for (const PathOutcome& o : outcomes) {
    if (o.value >= 0.0) law.samples.push_back(o.value);
    for (std::size_t c = 0; c < opt.checkpoints.size(); ++c) {
      if (o.value >= 0.0 || o.death_time > opt.checkpoints[c]) ++law.checkpoint_survivors[c];
    }
  }
  law.n_survivors = static_cast<std::int64_t>(law.samples.size());
  if (law.n_survivors == 0) {
    std::ostringstream os;
    os << "no path survived to T = " << law.horizon << "; use more paths or a shorter horizon";
    fail(ErrorCode::insufficient_horizon, os.str());
  }
  std::sort(law.samples.begin(), law.samples.end());

  law.bin_edges.resize(static_cast<std::size_t>(opt.n_bins) + 1);
  for (int i = 0; i <= opt.n_bins; ++i) law.bin_edges[i] = A * i / opt.n_bins;
  law.bin_masses.assign(static_cast<std::size_t>(opt.n_bins), 0.0);
  for (double v : law.samples) {
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(v / A * opt.n_bins), opt.n_bins - 1);
    law.bin_masses[bin] += 1.0;
  }
  for (double& m : law.bin_masses) m /= static_cast<double>(law.n_survivors);
  return law;
}

double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  return d;
}

double ks_critical(double alpha, std::int64_t n, std::int64_t m) {
  if (!(alpha > 0.0 && alpha < 1.0) || n <= 0 || m < 0) fail(ErrorCode::invalid_argument, "bad KS arguments");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return m == 0 ? c / std::sqrt(nn) : c * std::sqrt((nn + mm) / (nn * mm));
}

double survivor_decay_rate(std::span<const double> times, std::span<const std::int64_t> survivors) {
  if (times.size() != survivors.size() || times.size() < 2) {
    fail(ErrorCode::invalid_argument, "decay regression needs at least two matching checkpoints");
  }
  double st = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (survivors[i] <= 0) fail(ErrorCode::insufficient_horizon, "a checkpoint has no survivors");
    st += times[i];
    sy += std::log(static_cast<double>(survivors[i]));
  }
  const double k = static_cast<double>(times.size());
  st /= k;
  sy /= k;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    num += (times[i] - st) * (std::log(static_cast<double>(survivors[i])) - sy);
    den += (times[i] - st) * (times[i] - st);
  }
  return num / den;
}

}  // namespace qsdsr
