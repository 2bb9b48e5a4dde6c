#include "kbest/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kbest/quadrature.hpp"

namespace kbest::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// t[n] = ln(n!) for n = 0..171.
const std::array<double, 172>& log_factorial_table() {
  static const std::array<double, 172> table = [] {
    std::array<double, 172> t{};
    double fact = 1.0;
    t[0] = 0.0;
    for (int n = 1; n < 172; ++n) {
      fact *= n;
      t[n] = std::log(fact);
    }
    return t;
  }();
  return table;
}

double stirling_ln_gamma(double x) {
  // B_{2n} / (2n (2n-1)) for n = 1..8.
  static constexpr std::array<double, 8> kCoeff = {
      1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,       -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0,  1.0 / 156.0,        -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  for (auto it = kCoeff.rbegin(); it != kCoeff.rend(); ++it) series = series * inv2 + *it;
  series *= inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double e1_series_scaled(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= -x / n;
    const double contrib = term / n;
    sum += contrib;
    if (std::abs(contrib) < kEps * std::abs(sum)) break;
  }
  const double e1 = -kEulerGamma - std::log(x) - sum;
  return std::exp(x) * e1;
}

// Modified Lentz evaluation of the E_n continued fraction, already scaled
// by e^x.
double expn_cf_scaled(int n, double x) {
  double b = x + n;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (n - 1 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("expn continued fraction failed to converge");
}

}  // namespace

double upper_incomplete_gamma(int k, double x) {
  if (k < 1) throw std::domain_error("upper_incomplete_gamma: order must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be >= 0");

  double sum = 1.0;
  double term = 1.0;
  for (int j = 1; j < k; ++j) {
    term *= x / j;
    sum += term;
  }

  // e^{-x} is a normal double up to x ~ 708; beyond that go through logs.
  if (x <= 700.0 && k <= 171) {
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    const double value = fact * sum * std::exp(-x);
    if (!std::isfinite(value)) throw std::overflow_error("upper_incomplete_gamma: overflow");
    return value;
  }
  if (!std::isfinite(sum)) throw std::overflow_error("upper_incomplete_gamma: overflow in partial sum");
  const double log_value = ln_gamma(static_cast<double>(k)) - x + std::log(sum);
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("upper_incomplete_gamma: result exceeds double range");
  }
  return std::exp(log_value);
}

double digamma_int(int k) {
  if (k < 1) throw std::domain_error("digamma_int: argument must be >= 1");
  double harmonic = 0.0;
  for (int j = k - 1; j >= 1; --j) harmonic += 1.0 / j;
  return harmonic - kEulerGamma;
}

double e1_scaled(double x) {
  if (!(x > 0.0)) throw std::domain_error("e1_scaled: x must be > 0");
  return x <= 1.0 ? e1_series_scaled(x) : expn_cf_scaled(1, x);
}

double expn_scaled(int n, double x) {
  if (n < 1) throw std::domain_error("expn_scaled: order must be >= 1");
  if (!(x > 0.0)) throw std::domain_error("expn_scaled: x must be > 0");
  if (x > 1.0) return expn_cf_scaled(n, x);
  // Upward recurrence E_{m+1} = (e^{-x} - x E_m) / m; stable for x <= m.
  double s = e1_series_scaled(x);
  for (int m = 1; m < n; ++m) s = (1.0 - x * s) / m;
  return s;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: x must be > 0");
  if (x < 172.0 && x == std::floor(x)) return log_factorial_table()[static_cast<int>(x) - 1];
  if (x >= 15.0) return stirling_ln_gamma(x);
  double shifted = x;
  double product = 1.0;
  while (shifted < 15.0) {
    product *= shifted;
    shifted += 1.0;
  }
  return stirling_ln_gamma(shifted) - std::log(product);
}

double log_tricomi_u(double a, double b, double z) {
  if (!(a > 0.0)) throw std::domain_error("tricomi_u: a must be > 0");
  if (!(z > 0.0)) throw std::domain_error("tricomi_u: z must be > 0");

  // Substituting t = u / z gives
  //   U = z^{-a} / Gamma(a) * int_0^inf e^{-u} u^{a-1} (1 + u/z)^{b-a-1} du,
  // whose integrand is O(1) whatever the size of z.
  const double c = b - a - 1.0;
  const double split = std::max(z, a);
  auto kernel = [&](double u) {
    if (u <= 0.0) return 0.0;
    return std::exp(-u + (a - 1.0) * std::log(u) + c * std::log1p(u / z));
  };

  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 4000;

  double head = 0.0;
  if (a < 1.0) {
    // u = v^{1/a} absorbs the u^{a-1} endpoint singularity.
    auto smooth = [&](double v) {
      if (v <= 0.0) return 1.0 / a;
      const double u = std::pow(v, 1.0 / a);
      return std::exp(-u + c * std::log1p(u / z)) / a;
    };
    head = quad::integrate(smooth, 0.0, std::pow(split, a), opts).value;
  } else {
    head = quad::integrate(kernel, 0.0, split, opts).value;
  }
  quad::Options tail_opts = opts;
  tail_opts.abs_tol = 1e-16 * std::abs(head);
  const double tail = quad::integrate_to_infinity(kernel, split, 1.0, tail_opts).value;
  const double integral = head + tail;
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw quad::NonConvergence("tricomi_u: integral is not a positive finite number", integral, 0.0);
  }
  return -a * std::log(z) + std::log(integral) - ln_gamma(a);
}

double tricomi_u(double a, double b, double z) { return std::exp(log_tricomi_u(a, b, z)); }

}  // namespace kbest::specfun
