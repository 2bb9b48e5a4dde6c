#include "kbest/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kbest/quadrature.hpp"
#include "kbest/specfun.hpp"

namespace kbest {

void QosSpec::validate() const {
  if (!(a_exponent >= 0.0) || !std::isfinite(a_exponent)) {
    throw std::invalid_argument("delay exponent A must be finite and >= 0");
  }
}

QosSpec QosSpec::from_delay(double theta, double block_length, double bandwidth) {
  QosSpec q{theta * block_length * bandwidth / std::numbers::ln2};
  q.validate();
  return q;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::asymptotic:
      return "asymptotic";
    case Method::quadrature:
      return "quadrature";
    case Method::montecarlo:
      return "montecarlo";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "asymptotic") return Method::asymptotic;
  if (name == "quadrature") return Method::quadrature;
  if (name == "montecarlo") return Method::montecarlo;
  return std::nullopt;
}

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    magnitude_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  double magnitude() const { return magnitude_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double magnitude_ = 0.0;
};

void check_limit_args(int k, double b) {
  if (k < 1) throw std::invalid_argument("rank k must be >= 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::domain_error("normalising constant b must be positive and finite");
}

}  // namespace

namespace detail {

LimitAvgBreakdown asymptotic_avg_direct(int k, double b, double inner_sign) {
  check_limit_args(k, b);
  CompensatedSum acc;
  acc.add(std::log(b));
  acc.add(-specfun::digamma_int(k));
  const double e1s = specfun::e1_scaled(b);
  double inv_fact = 1.0;  // 1 / n!
  for (int n = 0; n < k; ++n) {
    if (n > 0) inv_fact /= n;
    // (-1)^{n-1} b^n e^b Ei(-b) with e^b Ei(-b) = -e1_scaled(b).
    const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
    acc.add(inv_fact * sign_n * std::pow(b, n) * e1s);
    double v_fact = 1.0;  // (v-1)!
    for (int v = 1; v <= n; ++v) {
      if (v > 1) v_fact *= (v - 1);
      const double sign_v = ((n - v) % 2 == 0) ? 1.0 : -1.0;
      acc.add(inner_sign * inv_fact * v_fact * sign_v * std::pow(b, n - v));
    }
  }
  LimitAvgBreakdown out;
  const double total = acc.value();
  out.value = total / kLn2;
  out.condition = total != 0.0 ? acc.magnitude() / std::abs(total) : std::numeric_limits<double>::infinity();
  out.precision_warning = out.condition > 1e12;
  return out;
}

}  // namespace detail

LimitAvgBreakdown asymptotic_avg_breakdown(int k, double b) {
  LimitAvgBreakdown out = detail::asymptotic_avg_direct(k, b);
  if (out.condition <= kConditionSwitch) return out;

  // (-1)^n b^n e^b E1(b) + sum_{v=1}^n (v-1)! (-b)^{n-v} is the remainder of
  // the asymptotic series of e^b E1(b) after n terms, which equals
  // n! e^b E_{n+1}(b) > 0. Dividing by n! leaves e^b E_{n+1}(b).
  CompensatedSum acc;
  acc.add(std::log(b));
  acc.add(-specfun::digamma_int(k));
  for (int n = 0; n < k; ++n) acc.add(specfun::expn_scaled(n + 1, b));
  out.value = acc.value() / kLn2;
  out.remainder_form = true;
  return out;
}

double asymptotic_avg_from_b(int k, double b) { return asymptotic_avg_breakdown(k, b).value; }

double avg_k1_closed_form(double b) {
  if (!(b > 0.0)) throw std::domain_error("avg_k1_closed_form: b must be > 0");
  return (std::log(b) + specfun::kEulerGamma + specfun::e1_scaled(b)) / kLn2;
}

double log_limit_neg_moment(int k, double a, double b) {
  check_limit_args(k, b);
  if (!(a > 0.0)) throw std::domain_error("delay exponent must be > 0");
  return k * std::log(b) + specfun::log_tricomi_u(a + k, k + 1.0, b) + specfun::ln_gamma(a + k) -
         specfun::ln_gamma(k);
}

double asymptotic_eff_from_b(int k, double a, double b) {
  if (a == 0.0) return asymptotic_avg_from_b(k, b);
  return -log_limit_neg_moment(k, a, b) / (a * kLn2);
}

ThroughputEstimate asymptotic_avg(const SelectionSpec& sel, const ChannelParams& p) {
  sel.validate();
  p.validate();
  return {asymptotic_avg_from_b(sel.rank, scale_b(sel.n_users, p)), std::nullopt, Method::asymptotic};
}

ThroughputEstimate asymptotic_eff(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p) {
  qos.validate();
  if (qos.a_exponent == 0.0) return asymptotic_avg(sel, p);
  sel.validate();
  p.validate();
  return {asymptotic_eff_from_b(sel.rank, qos.a_exponent, scale_b(sel.n_users, p)), std::nullopt,
          Method::asymptotic};
}

namespace {

double limit_expectation(int k, const std::function<double(double)>& g) {
  const LimitLaw law{k, 1.0};
  auto integrand = [&](double z) {
    const double w = limit_pdf(z, law);
    return w == 0.0 ? 0.0 : g(z) * w;
  };
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  const double head = quad::integrate(integrand, 0.0, 1.0, opts).value;
  opts.abs_tol = 1e-16 * std::abs(head);
  const double tail = quad::integrate_to_infinity(integrand, 1.0, 1.0, opts).value;
  return head + tail;
}

// Integral of g(z) * exact_kth_pdf(z) over (0, inf), split at the
// single-user scale and at b so that each piece sees one feature.
double exact_expectation(const SelectionSpec& sel, const ChannelParams& p, const std::function<double(double)>& g,
                         double abs_tol) {
  const double s = p.scale();
  const double q = sel.n_users >= 2 ? scale_b(sel.n_users, p) : s;
  const double lo = std::min(s, q);
  const double hi = std::max(s, q);
  auto integrand = [&](double z) {
    const double w = exact_kth_pdf(z, sel, p);
    return w == 0.0 ? 0.0 : g(z) * w;
  };
  quad::Options opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = 1e-12;
  double total = quad::integrate(integrand, 0.0, lo, opts).value;
  if (hi > lo) total += quad::integrate(integrand, lo, hi, opts).value;
  total += quad::integrate_to_infinity(integrand, hi, hi, opts).value;
  return total;
}

}  // namespace

double limit_avg_quadrature(int k, double b) {
  check_limit_args(k, b);
  return limit_expectation(k, [b](double z) { return std::log1p(b * z) / kLn2; });
}

double limit_neg_moment_quadrature(int k, double a, double b) {
  check_limit_args(k, b);
  return limit_expectation(k, [a, b](double z) { return std::exp(-a * std::log1p(b * z)); });
}

ThroughputEstimate exact_avg_quadrature(const SelectionSpec& sel, const ChannelParams& p) {
  sel.validate();
  p.validate();
  const double v = exact_expectation(sel, p, [](double z) { return std::log1p(z) / kLn2; }, 1e-10);
  return {v, std::nullopt, Method::quadrature};
}

ThroughputEstimate exact_eff_quadrature(const SelectionSpec& sel, const QosSpec& qos, const ChannelParams& p) {
  qos.validate();
  if (qos.a_exponent == 0.0) return exact_avg_quadrature(sel, p);
  sel.validate();
  p.validate();
  const double a = qos.a_exponent;
  const double m = exact_expectation(sel, p, [a](double z) { return std::exp(-a * std::log1p(z)); }, 1e-16);
  return {-std::log2(m) / a, std::nullopt, Method::quadrature};
}

}  // namespace kbest
