#include "kbest/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "kbest/order_stats.hpp"
#include "kbest/parallel.hpp"

namespace kbest {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::n_users:
      return "n_users";
    case SweepVariable::m_antennas:
      return "m_antennas";
    case SweepVariable::q_interference:
      return "q_interference";
  }
  return "unknown";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
  if (name == "n_users" || name == "n") return SweepVariable::n_users;
  if (name == "m_antennas" || name == "m") return SweepVariable::m_antennas;
  if (name == "q_interference" || name == "q") return SweepVariable::q_interference;
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

namespace {

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

bool wants(const SweepSpec& spec, Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

}  // namespace

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("sweep values must be strictly increasing");
  }
  if (ranks.empty()) throw std::invalid_argument("at least one rank k is required");
  if (a_values.empty()) throw std::invalid_argument("at least one delay exponent A is required");
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
  for (double a : a_values) QosSpec{a}.validate();
  const int max_rank = *std::max_element(ranks.begin(), ranks.end());
  if (*std::min_element(ranks.begin(), ranks.end()) < 1) throw std::invalid_argument("ranks must be >= 1");

  ChannelParams probe = channel;
  if (variable == SweepVariable::q_interference) probe.rho = 1.0;
  if (variable == SweepVariable::m_antennas) probe.m_antennas = 1;
  probe.validate();
  if (wants(*this, Method::montecarlo)) simulation.validate();

  std::vector<int> user_counts;
  if (variable == SweepVariable::n_users) {
    for (double v : values) {
      if (!is_integer(v) || v < 1) throw std::invalid_argument("user counts must be positive integers");
      user_counts.push_back(static_cast<int>(v));
    }
  } else {
    user_counts.push_back(n_users);
  }
  if (variable == SweepVariable::m_antennas) {
    for (double v : values) {
      if (!is_integer(v) || v < 1) throw std::invalid_argument("antenna counts must be positive integers");
    }
  }
  if (variable == SweepVariable::q_interference) {
    for (double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("Q values must be finite");
    }
  }
  const int min_n = *std::min_element(user_counts.begin(), user_counts.end());
  if (max_rank > min_n) {
    throw std::invalid_argument("rank k=" + std::to_string(max_rank) + " exceeds the smallest user count N=" +
                                std::to_string(min_n));
  }
  if (wants(*this, Method::asymptotic) && min_n < 2) {
    throw std::invalid_argument("asymptotic method needs N >= 2");
  }
}

const SweepCell& SweepTable::cell(std::size_t row, double a, int rank, Method method) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    if (col.a_exponent == a && col.rank == rank && col.method == method) return rows.at(row).cells.at(c);
  }
  throw std::out_of_range("no such sweep column");
}

SweepSpec figure_spec(int figure) {
  SweepSpec s;
  s.figure = figure;
  s.channel = ChannelParams{2.0, 1.0 / 3.0, 1.0, 2};
  s.simulation.trials = 1000000;
  switch (figure) {
    case 1:
      s.variable = SweepVariable::n_users;
      s.values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
      s.channel.m_antennas = 2;
      s.ranks = {1, 2, 3};
      s.a_values = {0.0};
      break;
    case 2:
      s.variable = SweepVariable::m_antennas;
      s.values = {1, 2, 3, 4, 5, 6, 7, 8};
      s.n_users = 20;
      s.ranks = {1, 2, 3};
      s.a_values = {0.0};
      break;
    case 3:
      s.variable = SweepVariable::n_users;
      s.values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
      s.channel.m_antennas = 1;
      s.ranks = {1, 2};
      s.a_values = {0.1, 2.0};
      break;
    case 4:
      s.variable = SweepVariable::q_interference;
      s.values = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18};
      s.channel.m_antennas = 3;
      s.n_users = 50;
      s.n0_db = 0.0;
      s.ranks = {1, 2};
      s.a_values = {0.0, 1.0};
      break;
    default:
      throw std::invalid_argument("figure must be 1, 2, 3 or 4");
  }
  return s;
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepTable table;
  table.spec = spec;
  for (double a : spec.a_values)
    for (int k : spec.ranks)
      for (Method m : spec.methods) table.columns.push_back({a, k, m});
  table.rows.resize(spec.values.size());

  parallel_blocks(spec.values.size(), spec.threads, [&](std::size_t i) {
    const double x = spec.values[i];
    ChannelParams p = spec.channel;
    int n = spec.n_users;
    switch (spec.variable) {
      case SweepVariable::n_users:
        n = static_cast<int>(x);
        break;
      case SweepVariable::m_antennas:
        p.m_antennas = static_cast<int>(x);
        break;
      case SweepVariable::q_interference:
        p.rho = rho_from_db(x, spec.n0_db);
        break;
    }

    std::optional<BatchEstimates> mc;
    if (wants(spec, Method::montecarlo)) mc = simulate_batch(n, spec.ranks, spec.a_values, p, spec.simulation);

    SweepRow& row = table.rows[i];
    row.x = x;
    for (std::size_t ai = 0; ai < spec.a_values.size(); ++ai) {
      const QosSpec qos{spec.a_values[ai]};
      for (std::size_t ri = 0; ri < spec.ranks.size(); ++ri) {
        const SelectionSpec sel{n, spec.ranks[ri]};
        for (Method m : spec.methods) {
          SweepCell cell;
          switch (m) {
            case Method::asymptotic:
              cell.value = asymptotic_eff(sel, qos, p).value;
              break;
            case Method::quadrature:
              cell.value = exact_eff_quadrature(sel, qos, p).value;
              break;
            case Method::montecarlo: {
              const ThroughputEstimate& e = mc->effective(ri, ai);
              cell.value = e.value;
              cell.ci_halfwidth = e.ci_halfwidth;
              break;
            }
          }
          row.cells.push_back(cell);
        }
      }
    }
  });
  return table;
}

std::vector<std::string> csv_header(const SweepTable& table) {
  std::vector<std::string> header{"x"};
  for (const auto& c : table.columns) {
    const std::string base =
        std::string(to_string(c.method)) + "_A" + format_number(c.a_exponent) + "_k" + std::to_string(c.rank);
    header.push_back(base);
    if (c.method == Method::montecarlo) header.push_back(base + "_ci");
  }
  return header;
}

void write_csv(std::ostream& os, const SweepTable& table) {
  const SweepSpec& s = table.spec;
  os << "# figure=" << s.figure << " variable=" << to_string(s.variable) << '\n';
  os << "# lambda=" << format_exact(s.channel.lambda) << " eta=" << format_exact(s.channel.eta);
  if (s.variable == SweepVariable::q_interference) {
    os << " n0_db=" << format_exact(s.n0_db);
  } else {
    os << " rho=" << format_exact(s.channel.rho);
  }
  if (s.variable != SweepVariable::m_antennas) os << " m_antennas=" << s.channel.m_antennas;
  if (s.variable != SweepVariable::n_users) os << " n_users=" << s.n_users;
  os << '\n';
  if (wants(s, Method::montecarlo)) {
    os << "# seed=" << s.simulation.seed << " trials=" << s.simulation.trials
       << " confidence_level=" << format_exact(s.simulation.confidence_level) << '\n';
  }
  const auto header = csv_header(table);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    os << format_exact(row.x);
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      os << ',' << format_exact(row.cells[c].value);
      if (table.columns[c].method == Method::montecarlo) os << ',' << format_exact(row.cells[c].ci_halfwidth.value_or(0.0));
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const SweepTable& table) {
  using nlohmann::json;
  const SweepSpec& s = table.spec;
  json doc;
  doc["figure"] = s.figure;
  doc["variable"] = to_string(s.variable);
  json params;
  params["lambda"] = s.channel.lambda;
  params["eta"] = s.channel.eta;
  params["rho"] = s.variable == SweepVariable::q_interference ? json(nullptr) : json(s.channel.rho);
  params["n0_db"] = s.n0_db;
  params["m_antennas"] = s.variable == SweepVariable::m_antennas ? json(nullptr) : json(s.channel.m_antennas);
  params["n_users"] = s.variable == SweepVariable::n_users ? json(nullptr) : json(s.n_users);
  doc["parameters"] = params;
  doc["ranks"] = s.ranks;
  doc["a_values"] = s.a_values;
  json methods = json::array();
  for (Method m : s.methods) methods.push_back(to_string(m));
  doc["methods"] = methods;
  if (wants(s, Method::montecarlo)) {
    doc["simulation"] = {{"seed", s.simulation.seed},
                         {"trials", s.simulation.trials},
                         {"confidence_level", s.simulation.confidence_level}};
  } else {
    doc["simulation"] = nullptr;
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json results = json::object();
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      const auto& col = table.columns[c];
      json entry{{"value", row.cells[c].value}};
      if (row.cells[c].ci_halfwidth) entry["ci_halfwidth"] = *row.cells[c].ci_halfwidth;
      results[std::string(to_string(col.method))]["A=" + format_number(col.a_exponent)]
             ["k=" + std::to_string(col.rank)] = entry;
    }
    rows.push_back({{"x", row.x}, {"results", results}});
  }
  doc["rows"] = rows;
  os << doc.dump(2) << '\n';
}

}  // namespace kbest
