#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kbest {

/// Runs fn(block) for block in [0, n_blocks), handing contiguous ranges of
/// blocks to `workers` threads. fn must only write to per-block storage.
template <typename Fn>
void parallel_blocks(std::size_t n_blocks, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                std::max<std::size_t>(n_blocks, 1));
  if (w == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = n_blocks * t / w;
    const std::size_t end = n_blocks * (t + 1) / w;
    pool.emplace_back([&, t, begin, end] {
      try {
        for (std::size_t b = begin; b < end; ++b) fn(b);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace kbest
