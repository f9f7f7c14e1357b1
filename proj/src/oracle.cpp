#include "qlext/oracle.hpp"

#include <algorithm>

namespace qlext {

namespace {

// Depth-first sweep over the page assignments of the new edges in canonical
// order, pages ascending, dropping a partial assignment on the first nesting
// violation. Returns the lexicographically first valid assignment.
bool assign_new_edges(const Instance& inst, const SpineOrder& spine,
                      std::vector<int>& pages, std::uint64_t& steps,
                      std::uint64_t max_steps, bool& exhausted) {
  const auto& new_edges = inst.new_edges();
  int m = static_cast<int>(new_edges.size());
  std::vector<int> current(m, -1);
  int at = 0;
  if (m == 0) return true;
  while (true) {
    if (at == m) {
      pages = current;
      return true;
    }
    bool advanced = false;
    for (int p = current[at] + 1; p < inst.ell(); ++p) {
      if (++steps > max_steps) {
        exhausted = true;
        return false;
      }
      bool okay = true;
      for (std::size_t j = 0; j < inst.old_edges().size() && okay; ++j)
        if (inst.old_pages()[j] == p &&
            is_nesting(spine, new_edges[at], inst.old_edges()[j]))
          okay = false;
      for (int j = 0; j < at && okay; ++j)
        if (current[j] == p && is_nesting(spine, new_edges[at], new_edges[j]))
          okay = false;
      if (okay) {
        current[at] = p;
        advanced = true;
        break;
      }
    }
    if (advanced) {
      ++at;
    } else {
      current[at] = -1;
      if (at == 0) return false;
      --at;
    }
  }
}

}  // namespace

OracleResult solve_brute_force(const Instance& inst,
                               const OracleBudget& budget) {
  if (budget.max_branches < 1)
    throw precondition_error("oracle budget must allow at least one branch");
  OracleResult result;
  PlacementStream stream(inst);
  Placement placement;
  bool exhausted = false;
  while (stream.next(placement)) {
    if (++result.steps > budget.max_branches) {
      exhausted = true;
      break;
    }
    SpineOrder spine = spine_with_placement(inst, placement);
    std::vector<int> new_pages;
    if (assign_new_edges(inst, spine, new_pages, result.steps,
                         budget.max_branches, exhausted)) {
      result.status = OracleStatus::solved;
      result.layout = combine_layout(inst, spine, new_pages);
      return result;
    }
    if (exhausted) break;
  }
  if (exhausted) {
    if (budget.on_exhaust == OracleBudget::OnExhaust::fail)
      throw error("oracle budget exhausted after " +
                  std::to_string(result.steps) + " steps");
    result.status = OracleStatus::budget_exhausted;
    return result;
  }
  result.status = OracleStatus::unsolvable;
  return result;
}

int min_pages_brute_force(const Graph& g, const SpineOrder& spine) {
  int m = g.edge_count();
  if (m == 0) return 0;
  for (int ell = 1;; ++ell) {
    // DFS over assignments with early conflict exit.
    std::vector<int> page(m, -1);
    int at = 0;
    while (true) {
      if (at == m) return ell;
      bool advanced = false;
      for (int p = page[at] + 1; p < ell; ++p) {
        bool okay = true;
        for (int j = 0; j < at && okay; ++j)
          if (page[j] == p && is_nesting(spine, g.edges()[at], g.edges()[j]))
            okay = false;
        if (okay) {
          page[at] = p;
          advanced = true;
          break;
        }
      }
      if (advanced) {
        ++at;
      } else {
        page[at] = -1;
        if (at == 0) break;
        --at;
      }
    }
  }
}

}  // namespace qlext
