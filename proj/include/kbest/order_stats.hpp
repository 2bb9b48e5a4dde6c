#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kbest/channel.hpp"

namespace kbest {

/// N users, of which the k-th strongest (k = 1 is the best) is scheduled.
struct SelectionSpec {
  int n_users = 1;
  int rank = 1;

  /// Throws std::invalid_argument unless 1 <= k <= N.
  void validate() const;
};

/// Inverse-gamma limit law of Z_(N-k+1) / b.
struct LimitLaw {
  int rank = 1;
  double scale_b = 1.0;
};

/// Density of the k-th largest of N i.i.d. SNRs.
double exact_kth_pdf(double z, const SelectionSpec& sel, const ChannelParams& p);

/// b = F^{-1}(1 - 1/N). Throws std::invalid_argument for N < 2.
double scale_b(int n_users, const ChannelParams& p);

/// Limit law for the given selection: b from scale_b, rank from sel.
LimitLaw limit_law(const SelectionSpec& sel, const ChannelParams& p);

/// Gamma(k, 1/z) / (k-1)! for z > 0, else 0. Unscaled: the argument is
/// z = Z_(N-k+1) / b.
double limit_cdf(double z, const LimitLaw& law);

/// e^{-1/z} / (z^{k+1} (k-1)!) for z > 0, else 0.
double limit_pdf(double z, const LimitLaw& law);

/// k-th largest element (k = 1 is the maximum). Reorders `values`.
double kth_largest(std::span<double> values, int k);

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
/// Sorts `samples` in place.
double ks_distance(std::span<double> samples, const std::function<double(double)>& cdf);

/// Draws `trials` realisations of Z_(N-k+1) / b, trial i from substream
/// (seed, i), and returns their KS distance to the limit law. Work is split
/// over `threads` workers; the result does not depend on that split.
double ks_convergence(const SelectionSpec& sel, const ChannelParams& p, int trials,
                      std::uint64_t seed, int threads = 1);

}  // namespace kbest
