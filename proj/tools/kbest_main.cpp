// kbest: throughput tables for k-th best secondary-user selection.
//
//   kbest figure 1 [--values 5,10,20] [--trials N] [--format csv|json]
//   kbest sweep --vary n --values 5,10,20 --k 1,2 --a 0,1 [--methods ...]
//   kbest validate --level fast|full
//
// Exit status: 0 success, 1 validation failure, 2 invalid arguments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kbest/channel.hpp"
#include "kbest/sweep.hpp"
#include "kbest/throughput.hpp"
#include "kbest/validation.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::optional<int> n;
  std::vector<int> k;
  std::optional<int> m;
  std::optional<double> lambda;
  std::optional<double> eta;
  std::optional<double> rho;
  std::optional<double> q_db;
  std::optional<double> n0_db;
  std::vector<double> a;
  std::optional<double> theta;
  std::optional<double> block_length;
  std::optional<double> bandwidth;
  std::vector<double> values;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> methods;
  std::string format = "csv";
  std::string out;
};

std::optional<std::uint64_t> env_u64(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) + " is not an unsigned integer");
  }
}

std::uint64_t resolve_seed(const Options& o, std::uint64_t fallback) {
  if (o.seed) return *o.seed;
  if (auto e = env_u64("KBEST_SEED")) return *e;
  return fallback;
}

int resolve_threads(const Options& o) {
  if (o.threads) return *o.threads;
  if (auto e = env_u64("KBEST_THREADS")) return static_cast<int>(*e);
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "number of secondary users N");
  cmd->add_option("--k", o.k, "selection ranks (1 = best)")->delimiter(',');
  cmd->add_option("--m", o.m, "receive antennas M");
  cmd->add_option("--lambda", o.lambda, "rate of |g|^2 (SU to primary receiver)");
  cmd->add_option("--eta", o.eta, "rate of |h|^2 (SU to secondary receiver)");
  auto* rho = cmd->add_option("--rho", o.rho, "rho = N0 / Q (linear)");
  auto* q = cmd->add_option("--q-db", o.q_db, "interference cap Q in dB");
  cmd->add_option("--n0-db", o.n0_db, "noise power N0 in dB");
  rho->excludes(q);
  cmd->add_option("--a", o.a, "delay exponents A = theta T B / ln 2 (0 = average)")->delimiter(',');
  cmd->add_option("--theta", o.theta, "delay QoS exponent theta (with --block-length, --bandwidth)");
  cmd->add_option("--block-length", o.block_length, "block length T");
  cmd->add_option("--bandwidth", o.bandwidth, "bandwidth B");
  cmd->add_option("--values", o.values, "grid of the swept variable")->delimiter(',');
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed (default: $KBEST_SEED)");
  cmd->add_option("--threads", o.threads, "worker threads (default: $KBEST_THREADS or all cores)");
  cmd->add_option("--methods", o.methods, "asymptotic,quadrature,montecarlo")->delimiter(',');
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path (default: stdout)");
}

void apply_overrides(kbest::SweepSpec& spec, const Options& o) {
  using kbest::SweepVariable;
  const auto swept = [&](SweepVariable v, const char* flag) {
    if (spec.variable == v) {
      throw std::invalid_argument(std::string(flag) + " sets the swept variable; use --values to change the grid");
    }
  };
  if (o.n) {
    swept(SweepVariable::n_users, "--n");
    spec.n_users = *o.n;
  }
  if (o.m) {
    swept(SweepVariable::m_antennas, "--m");
    spec.channel.m_antennas = *o.m;
  }
  if (o.q_db) swept(SweepVariable::q_interference, "--q-db");
  if (o.rho) swept(SweepVariable::q_interference, "--rho");
  if (!o.k.empty()) spec.ranks = o.k;
  if (o.lambda) spec.channel.lambda = *o.lambda;
  if (o.eta) spec.channel.eta = *o.eta;
  if (o.rho) spec.channel.rho = *o.rho;
  if (o.n0_db) spec.n0_db = *o.n0_db;
  if (o.q_db) spec.channel.rho = kbest::rho_from_db(*o.q_db, spec.n0_db);
  if (o.n0_db && !o.q_db && spec.variable != SweepVariable::q_interference) {
    throw std::invalid_argument("--n0-db needs --q-db outside a Q sweep");
  }

  const bool triple = o.theta || o.block_length || o.bandwidth;
  if (triple) {
    if (!(o.theta && o.block_length && o.bandwidth)) {
      throw std::invalid_argument("--theta, --block-length and --bandwidth must be given together");
    }
    if (!o.a.empty()) throw std::invalid_argument("give either --a or the --theta/--block-length/--bandwidth triple");
    spec.a_values = {kbest::QosSpec::from_delay(*o.theta, *o.block_length, *o.bandwidth).a_exponent};
  } else if (!o.a.empty()) {
    spec.a_values = o.a;
  }
  if (!o.values.empty()) spec.values = o.values;
  if (o.trials) spec.simulation.trials = *o.trials;
  if (!o.methods.empty()) {
    spec.methods.clear();
    for (const auto& name : o.methods) {
      auto m = kbest::parse_method(name);
      if (!m) throw std::invalid_argument("unknown method '" + name + "'");
      spec.methods.push_back(*m);
    }
  }
  spec.simulation.seed = resolve_seed(o, spec.simulation.seed);
  spec.threads = resolve_threads(o);
  spec.simulation.parallel_chunks = 1;
}

int emit_table(const kbest::SweepSpec& spec, const Options& o) {
  const kbest::SweepTable table = kbest::run_sweep(spec);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw std::runtime_error("cannot open " + o.out);
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "json") {
    kbest::write_json(os, table);
  } else {
    kbest::write_csv(os, table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average and effective throughput of k-th best secondary-user selection"};
  app.require_subcommand(1);

  Options fig_opts;
  int figure = 0;
  auto* fig = app.add_subcommand("figure", "reproduce one of the four reference sweeps as a table");
  fig->add_option("figure", figure, "figure number (1-4)")->required()->check(CLI::Range(1, 4));
  add_common(fig, fig_opts);

  Options sweep_opts;
  std::string vary;
  auto* sweep = app.add_subcommand("sweep", "custom sweep over N, M or Q");
  sweep->add_option("--vary", vary, "n, m or q")->required();
  add_common(sweep, sweep_opts);

  std::string level = "fast";
  Options val_opts;
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  validate->add_option("--seed", val_opts.seed, "seed (default: $KBEST_SEED)");
  validate->add_option("--threads", val_opts.threads, "worker threads");
  validate->add_option("--out", val_opts.out, "report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fig) {
      kbest::SweepSpec spec = kbest::figure_spec(figure);
      apply_overrides(spec, fig_opts);
      return emit_table(spec, fig_opts);
    }
    if (*sweep) {
      kbest::SweepSpec spec;
      auto v = kbest::parse_sweep_variable(vary);
      if (!v) throw std::invalid_argument("--vary must be n, m or q");
      spec.variable = *v;
      apply_overrides(spec, sweep_opts);
      if (spec.values.empty()) throw std::invalid_argument("--values is required for a sweep");
      return emit_table(spec, sweep_opts);
    }
    if (*validate) {
      const auto lvl = *kbest::validation::parse_level(level);
      const auto report =
          kbest::validation::run(lvl, resolve_seed(val_opts, 20190101), resolve_threads(val_opts));
      const std::string text = report.text();
      if (val_opts.out.empty()) {
        std::cout << text;
      } else {
        std::ofstream file(val_opts.out);
        if (!file) throw std::runtime_error("cannot open " + val_opts.out);
        file << text;
      }
      return report.passed() ? 0 : kExitValidation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "kbest: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kbest: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
