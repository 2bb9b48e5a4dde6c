#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kbest/channel.hpp"
#include "kbest/order_stats.hpp"
#include "kbest/random.hpp"
#include "kbest/throughput.hpp"

namespace kbest {

struct SimulationConfig {
  int trials = 100000;
  std::uint64_t seed = 20190101;
  /// Worker threads. Results are bit-identical for every value.
  int parallel_chunks = 1;
  double confidence_level = 0.99;

  void validate() const;
};

/// Integrands of the average and effective throughput for one trial.
struct TrialResult {
  double selected_snr = 0.0;
  double log_rate = 0.0;     ///< log2(1 + Z)
  double neg_moment = 1.0;   ///< (1 + Z)^{-A}; 1 when A = 0
};

/// One trial: draw N SNRs from `rng`, pick the k-th largest. `scratch` is
/// resized to N.
TrialResult simulate_trial(const SelectionSpec& sel, double a_exponent, const ChannelParams& p, RandomStream& rng,
                           std::vector<double>& scratch);

/// Normal-approximation half-width for a sample with the given standard
/// deviation, size and confidence level.
double ci_halfwidth(double stddev, std::size_t n, double confidence_level);

/// Estimates for several ranks and delay exponents from one set of trials.
/// Trial i draws its N users from substream (seed, i), so every (rank, A)
/// pair sees the same channel realisations.
struct BatchEstimates {
  std::vector<int> ranks;
  std::vector<double> a_values;
  /// avg[r] for ranks[r]
  std::vector<ThroughputEstimate> avg;
  /// eff[r * a_values.size() + j] for ranks[r], a_values[j] (A > 0 only;
  /// A = 0 entries repeat avg[r]).
  std::vector<ThroughputEstimate> eff;

  const ThroughputEstimate& effective(std::size_t rank_index, std::size_t a_index) const {
    return eff[rank_index * a_values.size() + a_index];
  }
};

BatchEstimates simulate_batch(int n_users, std::span<const int> ranks, std::span<const double> a_values,
                              const ChannelParams& p, const SimulationConfig& cfg);

ThroughputEstimate simulate_avg(const SelectionSpec& sel, const ChannelParams& p, const SimulationConfig& cfg);

/// Requires A > 0; throws std::invalid_argument otherwise.
ThroughputEstimate simulate_eff(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p,
                                const SimulationConfig& cfg);

}  // namespace kbest
