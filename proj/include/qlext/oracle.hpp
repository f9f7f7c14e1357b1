#pragma once

#include <cstdint>
#include <optional>

#include "qlext/branch.hpp"
#include "qlext/core.hpp"

namespace qlext {

struct OracleBudget {
  std::uint64_t max_branches = 100'000'000;
  enum class OnExhaust { fail, report_unknown };
  OnExhaust on_exhaust = OnExhaust::report_unknown;
};

enum class OracleStatus { solved, unsolvable, budget_exhausted };

struct OracleResult {
  OracleStatus status = OracleStatus::unsolvable;
  std::optional<QueueLayout> layout;
  std::uint64_t steps = 0;
};

/// Exhaustive ground truth: every placement of the new vertices (in the same
/// order as the branching solvers) times every page assignment of the new
/// edges. Unsolvable is only reported after full enumeration; running out of
/// budget is a distinct outcome.
OracleResult solve_brute_force(const Instance& inst,
                               const OracleBudget& budget = {});

/// Smallest ell admitting a valid assignment under this spine, found by
/// trying ell = 0, 1, 2, ...
int min_pages_brute_force(const Graph& g, const SpineOrder& spine);

}  // namespace qlext
