#include "kbest/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "kbest/channel.hpp"
#include "kbest/montecarlo.hpp"
#include "kbest/order_stats.hpp"
#include "kbest/quadrature.hpp"
#include "kbest/specfun.hpp"
#include "kbest/sweep.hpp"
#include "kbest/throughput.hpp"

namespace kbest::validation {

std::optional<Level> parse_level(std::string_view name) {
  if (name == "fast") return Level::fast;
  if (name == "full") return Level::full;
  return std::nullopt;
}

void Context::touch(std::initializer_list<std::string_view> ops) {
  for (auto op : ops) covered.emplace(op);
}

namespace {

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double rel_err(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

const ChannelParams kFigureChannel{2.0, 1.0 / 3.0, 1.0, 2};

// Records a failing line, or the worst case when everything passed.
struct Tracker {
  explicit Tracker(CheckResult& r) : result(r) {}

  CheckResult& result;
  double worst = 0.0;
  std::string worst_line;

  void observe(bool ok, double metric, const std::string& line) {
    if (!ok) {
      result.passed = false;
      result.details.push_back("FAILED " + line);
    }
    if (metric >= worst) {
      worst = metric;
      worst_line = line;
    }
  }
  void finish() {
    if (!worst_line.empty()) result.details.push_back("worst: " + worst_line);
  }
};

double integrate_density(const std::function<double(double)>& pdf, double split) {
  quad::Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  return quad::integrate(pdf, 0.0, split, opts).value + quad::integrate_to_infinity(pdf, split, split, opts).value;
}

CheckResult check_avg_identity(Context& ctx) {
  ctx.touch({"asymptotic_avg", "e1_scaled", "digamma_int", "limit_pdf"});
  CheckResult r{"C1", "average-throughput closed form matches its defining integral", true, {}};
  Tracker t(r);
  for (int k = 1; k <= 5; ++k) {
    for (double b : {0.5, 2.0, 10.0, 50.0, 500.0}) {
      const double closed = asymptotic_avg_from_b(k, b);
      const double integral = limit_avg_quadrature(k, b);
      const double e = rel_err(closed, integral);
      t.observe(e <= 1e-8, e,
                format("k=%d b=%g closed=%.15g quadrature=%.15g rel=%.3e", k, b, closed, integral, e));
    }
  }
  t.finish();
  return r;
}

CheckResult check_eff_identity(Context& ctx) {
  ctx.touch({"asymptotic_eff", "tricomi_u", "ln_gamma"});
  CheckResult r{"C2", "effective-throughput closed form matches its defining integral", true, {}};
  Tracker t(r);
  for (int k = 1; k <= 4; ++k) {
    for (double a : {0.1, 1.0, 2.0}) {
      for (double b : {0.5, 5.0, 50.0}) {
        const double closed = std::exp(log_limit_neg_moment(k, a, b));
        const double integral = limit_neg_moment_quadrature(k, a, b);
        const double e = rel_err(closed, integral);
        t.observe(e <= 1e-8, e,
                  format("k=%d A=%g b=%g closed=%.15g quadrature=%.15g rel=%.3e", k, a, b, closed, integral, e));
      }
    }
  }
  t.finish();
  return r;
}

CheckResult check_k1_degeneracy(Context& ctx) {
  ctx.touch({"avg_k1_closed_form"});
  CheckResult r{"C3", "rank-1 average throughput equals the Euler-constant closed form", true, {}};
  Tracker t(r);
  for (double b : {0.5, 6.0, 100.0, 5000.0}) {
    const double general = asymptotic_avg_from_b(1, b);
    const double special = avg_k1_closed_form(b);
    const double e = rel_err(general, special);
    t.observe(e <= 1e-14, e, format("b=%g general=%.17g closed=%.17g rel=%.3e", b, general, special, e));
  }
  t.finish();
  return r;
}

CheckResult check_mutation(Context&) {
  CheckResult r{"M1", "a sign error in the inner finite sum is caught by the integral identity", true, {}};
  int detected = 0;
  int total = 0;
  for (int k = 2; k <= 5; ++k) {
    for (double b : {0.5, 2.0, 10.0, 50.0, 500.0}) {
      const double mutated = detail::asymptotic_avg_direct(k, b, -1.0).value;
      const double integral = limit_avg_quadrature(k, b);
      ++total;
      if (rel_err(mutated, integral) > 1e-8) ++detected;
    }
  }
  r.passed = detected == total;
  r.details.push_back(format("mutated sum rejected at %d of %d (k, b) points", detected, total));
  return r;
}

CheckResult check_special_values(Context& ctx) {
  ctx.touch({"upper_incomplete_gamma", "digamma_int", "e1_scaled", "tricomi_u", "ln_gamma"});
  CheckResult r{"S1", "special-function reference values", true, {}};
  Tracker t(r);
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;

  const double g32 = specfun::upper_incomplete_gamma(3, 2.0);
  const double g32_ref = quad::integrate_to_infinity([](double u) { return u * u * std::exp(-u); }, 2.0, 1.0, opts).value;
  t.observe(rel_err(g32, g32_ref) <= 1e-12, rel_err(g32, g32_ref), format("Gamma(3,2)=%.15g ref=%.15g", g32, g32_ref));

  const double psi4 = specfun::digamma_int(4);
  const double psi4_ref = -specfun::kEulerGamma + 1.0 + 0.5 + 1.0 / 3.0;
  t.observe(rel_err(psi4, psi4_ref) <= 1e-15, rel_err(psi4, psi4_ref), format("psi(4)=%.16g", psi4));

  const double e1 = specfun::e1_scaled(1.0) / std::exp(1.0);
  const double e1_ref = quad::integrate_to_infinity([](double u) { return std::exp(-u) / u; }, 1.0, 1.0, opts).value;
  t.observe(rel_err(e1, e1_ref) <= 1e-12, rel_err(e1, e1_ref), format("E1(1)=%.15g ref=%.15g", e1, e1_ref));

  const double lg = specfun::ln_gamma(2.5);
  const double lg_ref = std::log(quad::integrate_to_infinity([](double u) { return std::pow(u, 1.5) * std::exp(-u); },
                                                              0.0, 1.0, opts).value);
  t.observe(rel_err(lg, lg_ref) <= 1e-12, rel_err(lg, lg_ref), format("lnGamma(2.5)=%.15g ref=%.15g", lg, lg_ref));

  const double u = specfun::tricomi_u(2.0, 3.0, 3.0);
  t.observe(rel_err(u, 1.0 / 9.0) <= 1e-10, rel_err(u, 1.0 / 9.0), format("U(2;3;3)=%.15g ref=1/9", u));
  t.finish();
  return r;
}

CheckResult check_convergence(Context& ctx) {
  ctx.touch({"ks_convergence", "limit_cdf", "scale_b", "sample_snr"});
  CheckResult r{"C4", "k-th largest SNR over b converges to the inverse-gamma law", true, {}};
  const int trials = 100000;
  const double noise = 1.0 / std::sqrt(static_cast<double>(trials));
  std::vector<double> d;
  for (int n : {10, 100, 1000}) {
    d.push_back(ks_convergence(SelectionSpec{n, 2}, kFigureChannel, trials, ctx.seed, ctx.threads));
    r.details.push_back(format("N=%d KS=%.5f", n, d.back()));
  }
  if (!(d[1] < 0.05)) {
    r.passed = false;
    r.details.push_back("FAILED N=100 KS distance not below 0.05");
  }
  if (!(d[2] < 0.02)) {
    r.passed = false;
    r.details.push_back("FAILED N=1000 KS distance not below 0.02");
  }
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] > d[i - 1]) {
      ++inversions;
      small = small && (d[i] - d[i - 1] <= 2.0 * noise);
    }
  }
  if (inversions > 1 || (inversions == 1 && !small)) {
    r.passed = false;
    r.details.push_back(format("FAILED KS distance not decreasing in N (%d inversions)", inversions));
  }
  return r;
}

CheckResult check_figure1(Context& ctx) {
  ctx.touch({"simulate_avg", "asymptotic_avg", "sample_snr"});
  CheckResult r{"C5", "figure-1 regime: asymptotic average throughput vs Monte Carlo", true, {}};
  SimulationConfig cfg;
  cfg.trials = 1000000;
  cfg.seed = ctx.seed;
  cfg.parallel_chunks = ctx.threads;
  cfg.confidence_level = 0.99;
  const int ranks[] = {1, 2, 3};

  double gap50_k3 = 0.0;
  for (int n : {20, 30, 40, 50}) {
    const BatchEstimates mc = simulate_batch(n, ranks, {}, kFigureChannel, cfg);
    for (std::size_t ri = 0; ri < 3; ++ri) {
      const int k = ranks[ri];
      const double asym = asymptotic_avg(SelectionSpec{n, k}, kFigureChannel).value;
      const double sim = mc.avg[ri].value;
      const double ci = *mc.avg[ri].ci_halfwidth;
      const double gap = std::abs(asym - sim);
      if (k == 3) {
        if (n == 50) gap50_k3 = gap / sim;
        continue;
      }
      const bool ok = gap <= std::max(ci, 0.02 * sim);
      const std::string line =
          format("N=%d k=%d asymptotic=%.6f montecarlo=%.6f ci=%.6f rel_gap=%.4f", n, k, asym, sim, ci, gap / sim);
      r.details.push_back((ok ? "" : "FAILED ") + line);
      r.passed = r.passed && ok;
    }
  }
  const int rank3[] = {3};
  const BatchEstimates mc5 = simulate_batch(5, rank3, {}, kFigureChannel, cfg);
  const double asym5 = asymptotic_avg(SelectionSpec{5, 3}, kFigureChannel).value;
  const double gap5 = std::abs(asym5 - mc5.avg[0].value) / mc5.avg[0].value;
  const bool ok = gap5 > gap50_k3;
  r.details.push_back(format("%sk=3 relative gap: N=5 %.4f vs N=50 %.4f", ok ? "" : "FAILED ", gap5, gap50_k3));
  r.passed = r.passed && ok;
  return r;
}

CheckResult check_figure34(Context& ctx) {
  ctx.touch({"asymptotic_eff", "exact_eff_quadrature", "run_figure", "simulate_eff"});
  CheckResult r{"C6", "figure-3/4 regime: asymptotic vs exact effective throughput, trend in Q", true, {}};
  struct Point {
    double a;
    int m;
    int n;
  };
  for (const Point& pt : {Point{2.0, 1, 50}, Point{1.0, 3, 50}}) {
    ChannelParams p = kFigureChannel;
    p.m_antennas = pt.m;
    for (int k : {1, 2}) {
      const SelectionSpec sel{pt.n, k};
      const double asym = asymptotic_eff(sel, QosSpec{pt.a}, p).value;
      const double exact = exact_eff_quadrature(sel, QosSpec{pt.a}, p).value;
      const double e = rel_err(asym, exact);
      const bool ok = e <= 0.03;
      r.details.push_back(format("%sA=%g M=%d N=%d k=%d asymptotic=%.6f quadrature=%.6f rel=%.4f", ok ? "" : "FAILED ",
                                 pt.a, pt.m, pt.n, k, asym, exact, e));
      r.passed = r.passed && ok;
    }
  }

  SweepSpec spec = figure_spec(4);
  spec.methods = {Method::asymptotic, Method::quadrature, Method::montecarlo};
  spec.simulation.trials = 100000;
  spec.simulation.seed = ctx.seed;
  spec.simulation.parallel_chunks = 1;
  spec.threads = ctx.threads;
  const SweepTable table = run_sweep(spec);
  int violations = 0;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      if (table.rows[i].cells[c].value < table.rows[i - 1].cells[c].value) ++violations;
    }
  }
  r.details.push_back(format("%s%zu-point Q sweep, %zu columns, %d decreasing steps", violations ? "FAILED " : "",
                             table.rows.size(), table.columns.size(), violations));
  r.passed = r.passed && violations == 0;
  return r;
}

CheckResult check_normalization(Context& ctx) {
  ctx.touch({"snr_pdf", "exact_kth_pdf", "limit_pdf"});
  CheckResult r{"C7", "densities integrate to one", true, {}};
  Tracker t(r);
  for (int m : {1, 2, 3}) {
    ChannelParams p = kFigureChannel;
    p.m_antennas = m;
    const double total = integrate_density([&](double z) { return snr_pdf(z, p); }, p.scale());
    const double e = std::abs(total - 1.0);
    t.observe(e <= 1e-8, e, format("snr_pdf M=%d integral=%.15f", m, total));
  }
  for (auto [n, k] : {std::pair{5, 1}, std::pair{5, 3}, std::pair{20, 2}}) {
    const SelectionSpec sel{n, k};
    const double total =
        integrate_density([&](double z) { return exact_kth_pdf(z, sel, kFigureChannel); }, scale_b(n, kFigureChannel));
    const double e = std::abs(total - 1.0);
    t.observe(e <= 1e-8, e, format("exact_kth_pdf N=%d k=%d integral=%.15f", n, k, total));
  }
  for (int k = 1; k <= 6; ++k) {
    const LimitLaw law{k, 1.0};
    const double total = integrate_density([&](double z) { return limit_pdf(z, law); }, 1.0);
    const double e = std::abs(total - 1.0);
    t.observe(e <= 1e-8, e, format("limit_pdf k=%d integral=%.15f", k, total));
  }
  t.finish();
  return r;
}

CheckResult check_ordering(Context& ctx) {
  ctx.touch({"exact_avg_quadrature", "exact_eff_quadrature", "asymptotic_avg", "asymptotic_eff"});
  CheckResult r{"C8", "ordering in k, N and A; effective <= average", true, {}};
  const std::vector<int> ns{5, 10, 20, 50, 100};
  const std::vector<int> ks{1, 2, 3};
  const std::vector<double> as{0.0, 0.1, 0.5, 1.0, 2.0};
  int comparisons = 0;
  int violations = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++comparisons;
    if (!ok) {
      ++violations;
      r.details.push_back("FAILED " + what);
    }
  };
  for (Method method : {Method::asymptotic, Method::quadrature}) {
    const char* mname = method == Method::asymptotic ? "asymptotic" : "quadrature";
    for (int m : {1, 2, 3}) {
      ChannelParams p = kFigureChannel;
      p.m_antennas = m;
      // value[ni][ki][ai]
      std::vector<std::vector<std::vector<double>>> v(ns.size(), std::vector<std::vector<double>>(ks.size()));
      for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          const SelectionSpec sel{ns[ni], ks[ki]};
          for (double a : as) {
            v[ni][ki].push_back(method == Method::asymptotic ? asymptotic_eff(sel, QosSpec{a}, p).value
                                                             : exact_eff_quadrature(sel, QosSpec{a}, p).value);
          }
        }
      }
      for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          for (std::size_t ai = 0; ai < as.size(); ++ai) {
            const double x = v[ni][ki][ai];
            const auto where = format("%s M=%d N=%d k=%d A=%g", mname, m, ns[ni], ks[ki], as[ai]);
            if (ki > 0) expect(x < v[ni][ki - 1][ai], where + ": not below rank k-1");
            if (ni > 0) expect(x > v[ni - 1][ki][ai], where + ": not above smaller N");
            if (ai > 0) {
              expect(x <= v[ni][ki][0], where + ": effective exceeds average");
              expect(x < v[ni][ki][ai - 1], where + ": not below smaller A");
            }
          }
        }
      }
    }
  }
  r.passed = violations == 0;
  r.details.push_back(format("%d comparisons, %d violations", comparisons, violations));
  return r;
}

CheckResult check_single_user_mc(Context& ctx) {
  ctx.touch({"simulate_avg", "exact_avg_quadrature", "snr_cdf"});
  CheckResult r{"X1", "single-user Monte Carlo matches quadrature; empirical CDF matches snr_cdf", true, {}};
  SimulationConfig cfg;
  cfg.trials = 1000000;
  cfg.seed = ctx.seed;
  cfg.parallel_chunks = ctx.threads;
  const SelectionSpec sel{1, 1};
  const auto sim = simulate_avg(sel, kFigureChannel, cfg);
  const auto exact = exact_avg_quadrature(sel, kFigureChannel);
  const bool ok = std::abs(sim.value - exact.value) <= *sim.ci_halfwidth;
  r.details.push_back(format("%sN=1 M=2 montecarlo=%.6f ci=%.6f quadrature=%.6f", ok ? "" : "FAILED ", sim.value,
                             *sim.ci_halfwidth, exact.value));
  r.passed = ok;

  RandomStream rng(ctx.seed);
  ChannelParams p1 = kFigureChannel;
  p1.m_antennas = 1;
  const int n = 1000000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += sample_snr(p1, rng) <= 6.0;
  const double emp = static_cast<double>(below) / n;
  const bool ok_cdf = std::abs(emp - snr_cdf(6.0, p1)) <= 0.002;
  r.details.push_back(format("%sM=1 empirical F(6)=%.5f closed form=%.5f", ok_cdf ? "" : "FAILED ", emp, snr_cdf(6.0, p1)));
  r.passed = r.passed && ok_cdf;
  return r;
}

CheckResult check_effective_mc(Context& ctx) {
  ctx.touch({"simulate_eff", "exact_eff_quadrature"});
  CheckResult r{"X2", "figure-3 point: Monte Carlo effective throughput matches quadrature", true, {}};
  SimulationConfig cfg;
  cfg.trials = 1000000;
  cfg.seed = ctx.seed;
  cfg.parallel_chunks = ctx.threads;
  ChannelParams p = kFigureChannel;
  p.m_antennas = 1;
  const SelectionSpec sel{20, 1};
  const auto sim = simulate_eff(sel, QosSpec{2.0}, p, cfg);
  const auto exact = exact_eff_quadrature(sel, QosSpec{2.0}, p);
  const bool ok = std::abs(sim.value - exact.value) <= *sim.ci_halfwidth;
  r.details.push_back(format("%sN=20 k=1 A=2 M=1 montecarlo=%.6f ci=%.6f quadrature=%.6f", ok ? "" : "FAILED ",
                             sim.value, *sim.ci_halfwidth, exact.value));
  r.passed = ok;
  return r;
}

CheckResult check_coverage(Context& ctx) {
  ctx.touch({"validate"});
  CheckResult r{"X3", "every public operation was exercised", true, {}};
  std::vector<std::string> missing;
  for (const auto& op : operation_names()) {
    if (!ctx.covered.contains(op)) missing.push_back(op);
  }
  r.passed = missing.empty();
  std::string line = format("%zu of %zu operations exercised", operation_names().size() - missing.size(),
                            operation_names().size());
  for (const auto& m : missing) line += " missing:" + m;
  r.details.push_back(line);
  return r;
}

}  // namespace

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = {
      "upper_incomplete_gamma", "digamma_int",     "e1_scaled",           "tricomi_u",
      "ln_gamma",               "snr_cdf",         "snr_pdf",             "sample_snr",
      "exact_kth_pdf",          "scale_b",         "limit_cdf",           "limit_pdf",
      "ks_convergence",         "asymptotic_avg",  "avg_k1_closed_form",  "asymptotic_eff",
      "exact_avg_quadrature",   "exact_eff_quadrature", "simulate_avg", "simulate_eff",
      "run_figure",             "validate"};
  return names;
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"C1", "closed-form/integral identity, average throughput", Level::fast, check_avg_identity},
      {"C2", "closed-form/integral identity, effective throughput", Level::fast, check_eff_identity},
      {"C3", "rank-1 degeneracy", Level::fast, check_k1_degeneracy},
      {"M1", "mutation sanity", Level::fast, check_mutation},
      {"S1", "special-function values", Level::fast, check_special_values},
      {"C7", "normalisation", Level::fast, check_normalization},
      {"C8", "ordering", Level::fast, check_ordering},
      {"C6", "figure-3/4 regime", Level::full, check_figure34},
      {"C4", "limit-law convergence", Level::full, check_convergence},
      {"C5", "figure-1 regime", Level::full, check_figure1},
      {"X1", "single-user Monte Carlo", Level::full, check_single_user_mc},
      {"X2", "effective-throughput Monte Carlo", Level::full, check_effective_mc},
      {"X3", "operation coverage", Level::full, check_coverage},
  };
  return checks;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string Report::text() const {
  std::ostringstream os;
  os << "kbest validation level=" << (level == Level::fast ? "fast" : "full") << " seed=" << seed << '\n';
  int failed = 0;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.id << "  " << c.title << '\n';
    for (const auto& d : c.details) os << "    " << d << '\n';
    failed += !c.passed;
  }
  os << "summary: " << checks.size() - failed << " passed, " << failed << " failed\n";
  return os.str();
}

Report run(Level level, std::uint64_t seed, int threads) {
  Report report;
  report.level = level;
  report.seed = seed;
  Context ctx;
  ctx.seed = seed;
  ctx.threads = threads;
  for (const auto& check : registry()) {
    if (check.level == Level::full && level != Level::full) continue;
    try {
      report.checks.push_back(check.run(ctx));
    } catch (const std::exception& e) {
      report.checks.push_back({check.id, check.title, false, {std::string("FAILED exception: ") + e.what()}});
    }
  }
  return report;
}

}  // namespace kbest::validation
