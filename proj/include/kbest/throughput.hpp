#pragma once

#include <optional>
#include <string_view>

#include "kbest/channel.hpp"
#include "kbest/order_stats.hpp"

namespace kbest {

/// Normalised delay exponent A = theta T B / ln 2. A = 0 means no delay
/// constraint, in which case effective throughput equals average throughput.
struct QosSpec {
  double a_exponent = 0.0;

  void validate() const;
  static QosSpec from_delay(double theta, double block_length, double bandwidth);
};

enum class Method { asymptotic, quadrature, montecarlo };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Throughput in bit/s/Hz. ci_halfwidth is set for Monte Carlo estimates only.
struct ThroughputEstimate {
  double value = 0.0;
  std::optional<double> ci_halfwidth;
  Method method = Method::asymptotic;
};

/// Average throughput of the k-th best user under the inverse-gamma limit,
/// as a function of the normalising constant b.
///
/// The finite sum alternates and, for large b with k >= 2, its terms grow like
/// b^{k-1} while the result stays O(ln b). The sum is first formed with
/// compensated summation; when its condition number (sum of |terms| over
/// |result|) exceeds kConditionSwitch each bracket is replaced by the
/// equivalent non-alternating remainder n! e^b E_{n+1}(b).
struct LimitAvgBreakdown {
  double value = 0.0;
  double condition = 1.0;
  bool remainder_form = false;
  /// Set when the direct sum would lose more than 12 digits.
  bool precision_warning = false;
};

inline constexpr double kConditionSwitch = 1e4;

LimitAvgBreakdown asymptotic_avg_breakdown(int k, double b);
double asymptotic_avg_from_b(int k, double b);

/// Closed form for k = 1: [ln b + gamma + e^b E1(b)] / ln 2.
double avg_k1_closed_form(double b);

/// E[(1 + bZ)^{-A}] for Z with the rank-k limit law, in closed form through
/// the Tricomi function. Returned in log space.
double log_limit_neg_moment(int k, double a, double b);

/// Effective throughput -(1/A) log2 E[(1 + bZ)^{-A}]; A = 0 falls back to
/// asymptotic_avg_from_b.
double asymptotic_eff_from_b(int k, double a, double b);

ThroughputEstimate asymptotic_avg(const SelectionSpec& sel, const ChannelParams& p);
ThroughputEstimate asymptotic_eff(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p);

// Direct quadrature of the limit-law expectations. These are the integrals
// the closed forms above evaluate.

/// int_0^inf log2(1 + b z) f_k(z) dz with f_k the limit density.
double limit_avg_quadrature(int k, double b);
/// int_0^inf (1 + b z)^{-A} f_k(z) dz.
double limit_neg_moment_quadrature(int k, double a, double b);

/// Finite-N reference: E[log2(1 + Z_(N-k+1))] from the exact order-statistic
/// density.
ThroughputEstimate exact_avg_quadrature(const SelectionSpec& sel, const ChannelParams& p);
/// Finite-N reference: -(1/A) log2 E[(1 + Z_(N-k+1))^{-A}].
ThroughputEstimate exact_eff_quadrature(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p);

namespace detail {
/// The finite sum evaluated term by term; `inner_sign` multiplies the inner
/// v-sum and exists so tests can check that a sign error is detected.
LimitAvgBreakdown asymptotic_avg_direct(int k, double b, double inner_sign = 1.0);
}  // namespace detail

}  // namespace kbest
