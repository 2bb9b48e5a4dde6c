#pragma once

#include "kbest/random.hpp"

namespace kbest {

/// Fading and interference parameters of the underlay secondary network.
///
/// |g|^2 (SU to primary receiver) ~ Exp(lambda); each |h_j|^2 (SU to the
/// j-th secondary receive antenna) ~ Exp(eta); rho = N0 / Q. The SU transmits
/// at Q / |g|^2, so the MRC output SNR is gamma / (rho |g|^2) with
/// gamma = sum_j |h_j|^2.
struct ChannelParams {
  double lambda = 2.0;
  double eta = 1.0 / 3.0;
  double rho = 1.0;
  int m_antennas = 2;

  /// Throws std::invalid_argument unless every field is in range.
  void validate() const;

  /// lambda / (eta rho): the single-user median SNR when M = 1.
  double scale() const { return lambda / (eta * rho); }
};

/// Linear value from decibels.
double from_db(double db);

/// rho = N0 / Q with both given in dB.
double rho_from_db(double q_db, double n0_db);

/// F(z) = (rho z / (lambda/eta + rho z))^M for z > 0, else 0.
double snr_cdf(double z, const ChannelParams& p);

/// 1 - F(z), evaluated without cancellation in the upper tail.
double snr_ccdf(double z, const ChannelParams& p);

double snr_pdf(double z, const ChannelParams& p);

/// One draw of the instantaneous SNR with interference-driven power control.
double sample_snr(const ChannelParams& p, RandomStream& rng);

}  // namespace kbest
