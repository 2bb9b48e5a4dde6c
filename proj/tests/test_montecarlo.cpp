#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kbest/montecarlo.hpp"
#include "kbest/throughput.hpp"
#include "oracles.hpp"

using namespace kbest;

namespace {
const ChannelParams kFig1{2.0, 1.0 / 3.0, 1.0, 2};

SimulationConfig config(int trials, std::uint64_t seed = 20190101, int chunks = 1) {
  SimulationConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.parallel_chunks = chunks;
  return cfg;
}
}  // namespace

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(config(1).validate());
  CHECK_THROWS_AS(config(0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config(10, 1, 0).validate(), std::invalid_argument);
  SimulationConfig bad = config(10);
  bad.confidence_level = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("confidence half-width uses the normal quantile") {
  CHECK(ci_halfwidth(1.0, 100, 0.95) == doctest::Approx(0.1959963984540054).epsilon(1e-12));
  CHECK(ci_halfwidth(2.0, 400, 0.99) == doctest::Approx(2.0 * 2.5758293035489004 / 20.0).epsilon(1e-12));
  CHECK(std::isinf(ci_halfwidth(1.0, 1, 0.99)));
}

TEST_CASE("single user: simulation brackets the exact integral") {
  const auto mc = simulate_avg({1, 1}, kFig1, config(200000));
  const double exact = 4.212798049759066023;
  REQUIRE(mc.ci_halfwidth.has_value());
  CHECK(std::abs(mc.value - exact) <= *mc.ci_halfwidth);
  CHECK(mc.method == Method::montecarlo);
}

TEST_CASE("rank 5 earns less than rank 1") {
  const auto cfg = config(20000);
  CHECK(simulate_avg({20, 5}, kFig1, cfg).value < simulate_avg({20, 1}, kFig1, cfg).value);
}

TEST_CASE("N = 50, k = 2 against quadrature and the asymptotic law") {
  const auto mc = simulate_avg({50, 2}, kFig1, config(200000));
  const double exact = exact_avg_quadrature({50, 2}, kFig1).value;
  const double asym = asymptotic_avg({50, 2}, kFig1).value;
  CHECK(std::abs(mc.value - exact) <= *mc.ci_halfwidth);
  CHECK(oracle::rel_err(mc.value, asym) < 0.02);
}

TEST_CASE("effective throughput: N = 20, k = 1, A = 2, M = 1") {
  ChannelParams m1 = kFig1;
  m1.m_antennas = 1;
  const auto mc = simulate_eff({20, 1}, QosSpec{2.0}, m1, config(200000));
  // exact order-statistic integral, 25 digits
  CHECK(std::abs(mc.value - 6.3349990512816519355) <= *mc.ci_halfwidth);
  CHECK_THROWS_AS(simulate_eff({20, 1}, QosSpec{0.0}, m1, config(10)), std::invalid_argument);
}

TEST_CASE("quadrupling the trials halves the interval") {
  const double h1 = *simulate_avg({10, 2}, kFig1, config(20000)).ci_halfwidth;
  const double h4 = *simulate_avg({10, 2}, kFig1, config(80000)).ci_halfwidth;
  CHECK(h4 / h1 > 0.4);
  CHECK(h4 / h1 < 0.6);
}

TEST_CASE("results are bit-identical for any number of workers") {
  const int ranks[] = {1, 3};
  const double as[] = {0.0, 0.5, 2.0};
  // 5000 trials leave a short final block.
  const auto one = simulate_batch(30, ranks, as, kFig1, config(5000, 77, 1));
  for (int chunks : {2, 3, 8}) {
    const auto many = simulate_batch(30, ranks, as, kFig1, config(5000, 77, chunks));
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(many.avg[r].value == one.avg[r].value);
      CHECK(*many.avg[r].ci_halfwidth == *one.avg[r].ci_halfwidth);
      for (std::size_t j = 0; j < 3; ++j) CHECK(many.effective(r, j).value == one.effective(r, j).value);
    }
  }
  CHECK(simulate_avg({30, 1}, kFig1, config(5000, 78)).value != one.avg[0].value);
}

TEST_CASE("batch agrees with single-rank calls and A = 0 repeats the average") {
  const int ranks[] = {1, 2};
  const double as[] = {0.0, 1.0};
  const auto batch = simulate_batch(15, ranks, as, kFig1, config(3000, 5));
  CHECK(batch.avg[1].value == simulate_avg({15, 2}, kFig1, config(3000, 5)).value);
  CHECK(batch.effective(0, 1).value == simulate_eff({15, 1}, QosSpec{1.0}, kFig1, config(3000, 5)).value);
  CHECK(batch.effective(1, 0).value == batch.avg[1].value);
  CHECK(batch.effective(0, 1).value < batch.avg[0].value);
}

TEST_CASE("each trial selects a user with exactly k - 1 users above it") {
  RandomStream rng(314);
  std::vector<double> scratch;
  for (int k = 1; k <= 6; ++k) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto t = simulate_trial({12, k}, 1.0, kFig1, rng, scratch);
      const auto above = std::count_if(scratch.begin(), scratch.end(), [&](double z) { return z > t.selected_snr; });
      CHECK(above == k - 1);
      CHECK(t.log_rate == doctest::Approx(std::log2(1.0 + t.selected_snr)));
      CHECK(t.neg_moment == doctest::Approx(1.0 / (1.0 + t.selected_snr)));
    }
  }
}

TEST_CASE("selection ignores the order users are listed in") {
  std::mt19937_64 gen(9);
  RandomStream rng(10);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> users(25);
    for (auto& z : users) z = sample_snr(kFig1, rng);
    std::vector<double> shuffled = users;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    for (int k : {1, 4, 25}) CHECK(kth_largest(users, k) == kth_largest(shuffled, k));
  }
}

TEST_CASE("invalid selections are rejected") {
  CHECK_THROWS_AS(simulate_avg({5, 6}, kFig1, config(10)), std::invalid_argument);
  const int ranks[] = {1};
  const double as[] = {-1.0};
  CHECK_THROWS_AS(simulate_batch(5, ranks, as, kFig1, config(10)), std::invalid_argument);
}
