#include "kbest/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace kbest {

void ChannelParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
  if (m_antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double rho_from_db(double q_db, double n0_db) { return from_db(n0_db - q_db); }

namespace {
// rho z / (lambda/eta + rho z)
double ratio(double z, const ChannelParams& p) {
  const double c = p.lambda / p.eta;
  const double rz = p.rho * z;
  return rz / (c + rz);
}
}  // namespace

double snr_cdf(double z, const ChannelParams& p) {
  if (!(z > 0.0)) return 0.0;
  if (std::isinf(z)) return 1.0;
  return std::pow(ratio(z, p), p.m_antennas);
}

double snr_ccdf(double z, const ChannelParams& p) {
  if (!(z > 0.0)) return 1.0;
  if (std::isinf(z)) return 0.0;
  const double c = p.lambda / p.eta;
  const double log_ratio = -std::log1p(c / (p.rho * z));
  return -std::expm1(p.m_antennas * log_ratio);
}

double snr_pdf(double z, const ChannelParams& p) {
  if (!(z > 0.0) || std::isinf(z)) return 0.0;
  const double c = p.lambda / p.eta;
  const double denom = c + p.rho * z;
  const double r = p.rho * z / denom;
  return p.m_antennas * std::pow(r, p.m_antennas - 1) * (c / denom) * (p.rho / denom);
}

double sample_snr(const ChannelParams& p, RandomStream& rng) {
  const double g2 = rng.exponential(p.lambda);
  double gamma = 0.0;
  for (int j = 0; j < p.m_antennas; ++j) gamma += rng.exponential(p.eta);
  return gamma / (p.rho * g2);
}

}  // namespace kbest
