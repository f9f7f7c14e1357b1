#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlext/core.hpp"

namespace qlext {

/// One solver run inside the bench harness. `result` is one of "solved",
/// "unsolvable", "budget-exhausted" or "inapplicable".
struct BenchAlgoResult {
  std::string result;
  std::uint64_t branches = 0;
  std::optional<QueueLayout> layout;
};

struct BenchAlgo {
  std::string name;
  std::function<BenchAlgoResult(const Instance&)> run;
};

struct BenchRow {
  std::string instance_id;
  std::string algo;
  std::string result;
  std::uint64_t branches = 0;
  double milliseconds = 0.0;
};

struct BenchOutcome {
  std::vector<BenchRow> rows;  // ordered by instance id, then algo order
  bool disagreement = false;
  std::string detail;  // first disagreement, for diagnostics
};

/// Runs every algorithm on every instance. Two definitive results
/// ("solved" vs "unsolvable") that differ on one instance set the
/// disagreement flag: the solver-bug tripwire. Rows come back ordered by
/// instance position then algorithm position for any jobs value.
BenchOutcome run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const std::vector<BenchAlgo>& algos, unsigned jobs = 1);

/// CSV with the fixed header instance,algo,result,branches,milliseconds.
std::string to_csv(const std::vector<BenchRow>& rows);

}  // namespace qlext
