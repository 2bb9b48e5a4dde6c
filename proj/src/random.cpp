#include "kbest/random.hpp"

#include <bit>
#include <cmath>

namespace kbest {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t index) {
  // Two rounds of mixing keep neighbouring (seed, index) pairs far apart.
  std::uint64_t sm = seed;
  const std::uint64_t base = splitmix64(sm);
  std::uint64_t mixed = base ^ (index * 0xD1B54A32D192ED03ULL);
  return RandomStream(splitmix64(mixed));
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform_open() {
  // 53 random mantissa bits; k = 0 is rejected so log() below stays finite.
  for (;;) {
    const std::uint64_t k = (*this)() >> 11;
    if (k != 0) return static_cast<double>(k) * 0x1.0p-53;
  }
}

double RandomStream::exponential(double rate) { return -std::log(uniform_open()) / rate; }

}  // namespace kbest
