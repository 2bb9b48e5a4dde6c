#include "kbest/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kbest/parallel.hpp"
#include "kbest/specfun.hpp"

namespace kbest {

void SelectionSpec::validate() const {
  if (n_users < 1) throw std::invalid_argument("number of users must be >= 1");
  if (rank < 1 || rank > n_users) {
    throw std::invalid_argument("selection rank must satisfy 1 <= k <= N (k=" + std::to_string(rank) +
                                ", N=" + std::to_string(n_users) + ")");
  }
}

namespace {

// ln(k * C(N, k)).
double log_order_prefactor(int n, int k) {
  if (n <= 60) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::log(k * c);
  }
  using specfun::ln_gamma;
  return std::log(static_cast<double>(k)) + ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

}  // namespace

double exact_kth_pdf(double z, const SelectionSpec& sel, const ChannelParams& p) {
  if (!(z > 0.0)) return 0.0;
  const double f = snr_pdf(z, p);
  if (f == 0.0) return 0.0;
  const int n = sel.n_users;
  const int k = sel.rank;
  double log_value = log_order_prefactor(n, k) + std::log(f);
  if (n > k) log_value += (n - k) * std::log(snr_cdf(z, p));
  if (k > 1) log_value += (k - 1) * std::log(snr_ccdf(z, p));
  return std::exp(log_value);
}

double scale_b(int n_users, const ChannelParams& p) {
  if (n_users < 2) throw std::invalid_argument("scale_b: N must be >= 2 (the 1 - 1/N quantile of N = 1 is 0)");
  // (1 - 1/N)^{-1/M} - 1 without cancellation.
  const double denom = std::expm1(-std::log1p(-1.0 / n_users) / p.m_antennas);
  return p.scale() / denom;
}

LimitLaw limit_law(const SelectionSpec& sel, const ChannelParams& p) {
  return LimitLaw{sel.rank, scale_b(sel.n_users, p)};
}

double limit_cdf(double z, const LimitLaw& law) {
  if (!(z > 0.0)) return 0.0;
  if (std::isinf(z)) return 1.0;
  const double x = 1.0 / z;
  if (x > 1e6) return 0.0;
  return std::exp(std::log(specfun::upper_incomplete_gamma(law.rank, x)) - specfun::ln_gamma(law.rank));
}

double limit_pdf(double z, const LimitLaw& law) {
  if (!(z > 0.0) || std::isinf(z)) return 0.0;
  return std::exp(-1.0 / z - (law.rank + 1) * std::log(z) - specfun::ln_gamma(law.rank));
}

double kth_largest(std::span<double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) throw std::invalid_argument("kth_largest: k out of range");
  auto nth = values.begin() + (k - 1);
  std::nth_element(values.begin(), nth, values.end(), std::greater<>());
  return *nth;
}

double ks_distance(std::span<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_convergence(const SelectionSpec& sel, const ChannelParams& p, int trials, std::uint64_t seed,
                      int threads) {
  sel.validate();
  p.validate();
  if (trials < 1) throw std::invalid_argument("ks_convergence: trials must be >= 1");
  const LimitLaw law = limit_law(sel, p);

  constexpr std::size_t kBlock = 1024;
  const std::size_t n_trials = static_cast<std::size_t>(trials);
  const std::size_t n_blocks = (n_trials + kBlock - 1) / kBlock;
  std::vector<double> scaled(n_trials);

  parallel_blocks(n_blocks, threads, [&](std::size_t block) {
    std::vector<double> users(static_cast<std::size_t>(sel.n_users));
    const std::size_t end = std::min(n_trials, (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i) {
      RandomStream rng = RandomStream::derive(seed, i);
      for (auto& u : users) u = sample_snr(p, rng);
      scaled[i] = kth_largest(users, sel.rank) / law.scale_b;
    }
  });

  return ks_distance(scaled, [&](double z) { return limit_cdf(z, law); });
}

}  // namespace kbest
