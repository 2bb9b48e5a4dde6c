#include "kbest/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "kbest/parallel.hpp"

namespace kbest {

void SimulationConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (parallel_chunks < 1) throw std::invalid_argument("parallel_chunks must be >= 1");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw std::invalid_argument("confidence_level must lie in (0, 1)");
  }
}

TrialResult simulate_trial(const SelectionSpec& sel, double a_exponent, const ChannelParams& p, RandomStream& rng,
                           std::vector<double>& scratch) {
  scratch.resize(static_cast<std::size_t>(sel.n_users));
  for (auto& z : scratch) z = sample_snr(p, rng);
  const double z = kth_largest(scratch, sel.rank);
  TrialResult r;
  r.selected_snr = z;
  r.log_rate = std::log2(1.0 + z);
  r.neg_moment = a_exponent > 0.0 ? std::exp(-a_exponent * std::log1p(z)) : 1.0;
  return r;
}

double ci_halfwidth(double stddev, std::size_t n, double confidence_level) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  const boost::math::normal standard;
  const double zq = boost::math::quantile(standard, 0.5 * (1.0 + confidence_level));
  return zq * stddev / std::sqrt(static_cast<double>(n));
}

namespace {

// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const RunningStats& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }
  double stddev() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0)) : 0.0; }
};

constexpr std::size_t kBlock = 1024;

}  // namespace

BatchEstimates simulate_batch(int n_users, std::span<const int> ranks, std::span<const double> a_values,
                              const ChannelParams& p, const SimulationConfig& cfg) {
  p.validate();
  cfg.validate();
  if (ranks.empty()) throw std::invalid_argument("simulate_batch: no ranks requested");
  int max_rank = 0;
  for (int k : ranks) {
    SelectionSpec{n_users, k}.validate();
    max_rank = std::max(max_rank, k);
  }
  for (double a : a_values) QosSpec{a}.validate();

  const std::size_t n_ranks = ranks.size();
  const std::size_t n_a = a_values.size();
  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_blocks = (n_trials + kBlock - 1) / kBlock;

  // Per block: n_ranks log-rate accumulators, then n_ranks * n_a moment ones.
  const std::size_t per_block = n_ranks * (1 + n_a);
  std::vector<RunningStats> stats(n_blocks * per_block);

  parallel_blocks(n_blocks, cfg.parallel_chunks, [&](std::size_t block) {
    std::vector<double> users(static_cast<std::size_t>(n_users));
    RunningStats* acc = stats.data() + block * per_block;
    const std::size_t end = std::min(n_trials, (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i) {
      RandomStream rng = RandomStream::derive(cfg.seed, i);
      for (auto& z : users) z = sample_snr(p, rng);
      std::partial_sort(users.begin(), users.begin() + max_rank, users.end(), std::greater<>());
      for (std::size_t r = 0; r < n_ranks; ++r) {
        const double z = users[static_cast<std::size_t>(ranks[r] - 1)];
        acc[r].push(std::log2(1.0 + z));
        const double l1p = std::log1p(z);
        for (std::size_t j = 0; j < n_a; ++j) {
          acc[n_ranks + r * n_a + j].push(std::exp(-a_values[j] * l1p));
        }
      }
    }
  });

  std::vector<RunningStats> total(per_block);
  for (std::size_t block = 0; block < n_blocks; ++block) {
    for (std::size_t s = 0; s < per_block; ++s) total[s].merge(stats[block * per_block + s]);
  }

  BatchEstimates out;
  out.ranks.assign(ranks.begin(), ranks.end());
  out.a_values.assign(a_values.begin(), a_values.end());
  for (std::size_t r = 0; r < n_ranks; ++r) {
    const RunningStats& s = total[r];
    out.avg.push_back({s.mean, ci_halfwidth(s.stddev(), n_trials, cfg.confidence_level), Method::montecarlo});
  }
  for (std::size_t r = 0; r < n_ranks; ++r) {
    for (std::size_t j = 0; j < n_a; ++j) {
      const double a = a_values[j];
      if (a == 0.0) {
        out.eff.push_back(out.avg[r]);
        continue;
      }
      const RunningStats& s = total[n_ranks + r * n_a + j];
      const double mean_hw = ci_halfwidth(s.stddev(), n_trials, cfg.confidence_level);
      // Delta method through g(m) = -(1/A) log2 m, |g'(m)| = 1 / (A m ln 2).
      const double slope = 1.0 / (a * s.mean * std::numbers::ln2);
      out.eff.push_back({-std::log2(s.mean) / a, slope * mean_hw, Method::montecarlo});
    }
  }
  return out;
}

ThroughputEstimate simulate_avg(const SelectionSpec& sel, const ChannelParams& p, const SimulationConfig& cfg) {
  sel.validate();
  const int ranks[] = {sel.rank};
  return simulate_batch(sel.n_users, ranks, {}, p, cfg).avg.front();
}

ThroughputEstimate simulate_eff(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p,
                                const SimulationConfig& cfg) {
  sel.validate();
  qos.validate();
  if (qos.a_exponent == 0.0) throw std::invalid_argument("simulate_eff: A must be > 0; use simulate_avg for A = 0");
  const int ranks[] = {sel.rank};
  const double as[] = {qos.a_exponent};
  return simulate_batch(sel.n_users, ranks, as, p, cfg).eff.front();
}

}  // namespace kbest
