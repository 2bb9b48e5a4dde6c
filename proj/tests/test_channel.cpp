#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kbest/channel.hpp"
#include "kbest/random.hpp"
#include "oracles.hpp"

using namespace kbest;

namespace {
const ChannelParams kFig1{2.0, 1.0 / 3.0, 1.0, 2};

double sup_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}
}  // namespace

TEST_CASE("snr_cdf basic values") {
  CHECK(snr_cdf(0.0, kFig1) == 0.0);
  CHECK(snr_cdf(-3.0, kFig1) == 0.0);
  CHECK(snr_cdf(6.0, kFig1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(snr_cdf(12.0, kFig1) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("single antenna median sits at lambda / (eta rho)") {
  const ChannelParams dyadic{2.0, 0.5, 1.0, 1};
  CHECK(snr_cdf(dyadic.scale(), dyadic) == 0.5);
  ChannelParams p = kFig1;
  p.m_antennas = 1;
  CHECK(snr_cdf(p.scale(), p) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("snr_cdf is a proper CDF") {
  for (int m : {1, 2, 3}) {
    for (double rho : {0.1, 1.0, 7.0}) {
      ChannelParams p{2.0, 1.0 / 3.0, rho, m};
      CHECK(1.0 - snr_cdf(1e9, p) < 1e-6);
      double prev = 0.0;
      for (double z = 1e-3; z < 1e6; z *= 1.5) {
        const double f = snr_cdf(z, p);
        CHECK(f >= prev);
        CHECK(std::abs(snr_ccdf(z, p) - (1.0 - f)) < 1e-14);
        prev = f;
      }
    }
  }
}

TEST_CASE("scaling Q by c scales the SNR law by c") {
  for (double c : {0.5, 2.0, 10.0}) {
    ChannelParams scaled = kFig1;
    scaled.rho = kFig1.rho / c;
    for (double z : {0.3, 6.0, 41.0}) CHECK(snr_cdf(z, kFig1) == doctest::Approx(snr_cdf(c * z, scaled)).epsilon(1e-14));
  }
}

TEST_CASE("snr_pdf integrates to one and differentiates the CDF") {
  CHECK(snr_pdf(-1.0, kFig1) == 0.0);
  for (int m : {1, 2, 3}) {
    ChannelParams p = kFig1;
    p.m_antennas = m;
    const double total = oracle::integral_half_line([&](double z) { return snr_pdf(z, p); }, p.scale());
    CHECK(std::abs(total - 1.0) < 1e-10);
    const double fd = oracle::derivative([&](double z) { return snr_cdf(z, p); }, 5.0);
    CHECK(std::abs(fd - snr_pdf(5.0, p)) < 1e-6);
  }
}

TEST_CASE("dB helpers") {
  CHECK(from_db(0.0) == 1.0);
  CHECK(from_db(10.0) == doctest::Approx(10.0));
  CHECK(rho_from_db(10.0, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(kFig1.validate());
  CHECK_THROWS_AS((ChannelParams{0.0, 1.0, 1.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChannelParams{1.0, -1.0, 1.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChannelParams{1.0, 1.0, 0.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChannelParams{1.0, 1.0, 1.0, 0}.validate()), std::invalid_argument);
}

TEST_CASE("sampler is deterministic for a fixed seed") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 1000; ++i) CHECK(sample_snr(kFig1, a) == sample_snr(kFig1, b));
  RandomStream c = RandomStream::derive(42, 7);
  RandomStream d = RandomStream::derive(42, 7);
  RandomStream e = RandomStream::derive(42, 8);
  CHECK(c() == d());
  CHECK(c() != e());
}

TEST_CASE("uniform draws never hit zero and stay in (0, 1]") {
  RandomStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("empirical CDF of 10^6 draws at the median, M = 1") {
  ChannelParams p = kFig1;
  p.m_antennas = 1;
  RandomStream rng(2024);
  const int n = 1000000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += sample_snr(p, rng) <= 6.0;
  CHECK(std::abs(below / static_cast<double>(n) - snr_cdf(6.0, p)) < 0.002);
}

TEST_CASE("empirical CDF of 10^6 draws at z = 12, M = 2") {
  RandomStream rng(99);
  const int n = 1000000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += sample_snr(kFig1, rng) <= 12.0;
  CHECK(std::abs(below / static_cast<double>(n) - 4.0 / 9.0) < 0.002);
}

TEST_CASE("KS statistic of 10^5 draws against the closed form") {
  for (int m : {1, 2, 3}) {
    ChannelParams p = kFig1;
    p.m_antennas = m;
    RandomStream rng(17 + m);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = sample_snr(p, rng);
    CHECK(sup_distance(xs, [&](double z) { return snr_cdf(z, p); }) < 0.006);
  }
}
