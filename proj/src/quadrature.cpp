#include "kbest/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace kbest::quad {
namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending), with the
// Gauss-7 points at odd indices.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

Result integrate(const Integrand& f, double lo, double hi, const Options& opts) {
  if (!(lo <= hi)) throw std::invalid_argument("integrate: lo must not exceed hi");
  Result out;
  if (lo == hi) return out;

  std::priority_queue<Segment> work;
  Segment first = kronrod15(f, lo, hi);
  out.evaluations = 15;
  double total = first.value;
  double error = first.error;
  work.push(first);

  int intervals = 1;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (intervals >= opts.max_intervals) {
      throw NonConvergence("adaptive quadrature exhausted its refinement budget", total, error);
    }
    Segment worst = work.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NonConvergence("adaptive quadrature interval collapsed below resolution", total, error);
    }
    work.pop();
    Segment left = kronrod15(f, worst.lo, mid);
    Segment right = kronrod15(f, mid, worst.hi);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++intervals;
  }

  // Re-sum from the leaves so the running updates leave no drift behind.
  total = 0.0;
  error = 0.0;
  while (!work.empty()) {
    total += work.top().value;
    error += work.top().error;
    work.pop();
  }
  out.value = total;
  out.abs_error = error;
  if (!std::isfinite(total)) throw NonConvergence("integrand produced a non-finite value", total, error);
  return out;
}

Result integrate_to_infinity(const Integrand& f, double lo, double scale, const Options& opts) {
  if (!(scale > 0.0)) throw std::invalid_argument("integrate_to_infinity: scale must be positive");
  auto mapped = [&](double s) {
    const double one_minus = 1.0 - s;
    const double t = lo + scale * s / one_minus;
    const double jac = scale / (one_minus * one_minus);
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace kbest::quad
