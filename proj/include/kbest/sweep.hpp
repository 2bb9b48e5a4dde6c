#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbest/channel.hpp"
#include "kbest/montecarlo.hpp"
#include "kbest/throughput.hpp"

namespace kbest {

enum class SweepVariable { n_users, m_antennas, q_interference };

std::string_view to_string(SweepVariable v);
std::optional<SweepVariable> parse_sweep_variable(std::string_view name);

/// One parameter sweep. Every x value is evaluated for each delay exponent
/// in `a_values` (A = 0 is average throughput), each rank in `ranks` and each
/// method in `methods`.
///
/// For q_interference the x values are Q in dB and rho = N0 / Q with N0 taken
/// from `n0_db`; the `channel.rho` field is ignored.
struct SweepSpec {
  int figure = 0;  ///< 0 for a user-defined sweep
  SweepVariable variable = SweepVariable::n_users;
  std::vector<double> values;
  ChannelParams channel;
  int n_users = 20;
  std::vector<int> ranks{1};
  std::vector<double> a_values{0.0};
  double n0_db = 0.0;
  std::vector<Method> methods{Method::asymptotic, Method::montecarlo};
  SimulationConfig simulation;
  /// Workers used to evaluate x points concurrently.
  int threads = 1;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

struct SweepCell {
  double value = 0.0;
  std::optional<double> ci_halfwidth;
};

/// cells are ordered by (A, rank, method), matching SweepTable::columns.
struct SweepRow {
  double x = 0.0;
  std::vector<SweepCell> cells;
};

struct SweepColumn {
  double a_exponent;
  int rank;
  Method method;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepColumn> columns;
  std::vector<SweepRow> rows;

  const SweepCell& cell(std::size_t row, double a, int rank, Method method) const;
};

/// Preset sweeps 1 to 4.
SweepSpec figure_spec(int figure);

SweepTable run_sweep(const SweepSpec& spec);

/// Header names in output order: "x", then one column per SweepColumn named
/// "<method>_A<a>_k<k>", followed by "<...>_ci" for Monte Carlo columns.
std::vector<std::string> csv_header(const SweepTable& table);

void write_csv(std::ostream& os, const SweepTable& table);
void write_json(std::ostream& os, const SweepTable& table);

/// Compact decimal for column names: 0.1 -> "0.1", 2 -> "2".
std::string format_number(double v);

}  // namespace kbest
