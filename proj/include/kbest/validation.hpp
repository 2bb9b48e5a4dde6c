#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kbest::validation {

enum class Level { fast, full };

std::optional<Level> parse_level(std::string_view name);

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = true;
  std::vector<std::string> details;
};

/// Shared state for one validation run. Checks record the operations they
/// exercise so the full run can assert that nothing was left out.
struct Context {
  std::uint64_t seed = 20190101;
  int threads = 1;
  std::set<std::string> covered;

  void touch(std::initializer_list<std::string_view> ops);
};

struct Check {
  std::string id;
  std::string title;
  Level level;  ///< fast checks run at both levels
  std::function<CheckResult(Context&)> run;
};

/// Every check, in report order.
const std::vector<Check>& registry();

/// Names of every public operation the full run is expected to exercise.
const std::vector<std::string>& operation_names();

struct Report {
  Level level = Level::fast;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Deterministic text rendering: same seed, same bytes.
  std::string text() const;
};

Report run(Level level, std::uint64_t seed, int threads = 1);

}  // namespace kbest::validation
