#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace kbest {

/// xoshiro256** stream seeded through SplitMix64. Substreams are derived
/// from (seed, index) so that trial i always sees the same numbers,
/// whatever thread or chunk runs it.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  /// Stream for substream `index` of the global `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on (0, 1]; zero is never returned.
  double uniform_open();

  /// Exponential variate with the given rate, by inversion.
  double exponential(double rate);

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace kbest
