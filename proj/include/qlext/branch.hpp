#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qlext/core.hpp"

namespace qlext {

/// Where the new vertices go: gap_of[i] is the insertion gap of the i-th new
/// vertex (canonical order), gap k lying between spine positions k-1 and k
/// of H. `sequence` lists all new vertices sorted by (gap, within-gap rank)
/// and fixes the order of vertices sharing a gap.
struct Placement {
  std::vector<int> gap_of;
  std::vector<int> sequence;  // G vertex ids
};

/// Number of distinct placements of n_add vertices into old_count+1 gaps
/// with internal orders: the product of (old_count + i) for i = 1..n_add.
std::uint64_t placement_count(int old_count, int n_add);

/// Streams every placement exactly once, ordered lexicographically by
/// (gap vector, internal permutation index).
class PlacementStream {
 public:
  explicit PlacementStream(const Instance& inst);
  /// Yields the next placement, or false when exhausted.
  bool next(Placement& out);

 private:
  bool advance_orders();
  void rebuild_sequence(Placement& out) const;

  const Instance* inst_;
  std::vector<int> gaps_;                     // odometer over gap vector
  std::vector<std::vector<int>> gap_groups_;  // per gap: ordered occupants
  bool fresh_ = true;
  bool done_ = false;
};

/// Full spine for G realizing a placement on top of the spine of H.
SpineOrder spine_with_placement(const Instance& inst, const Placement& p);

struct BranchStats {
  std::uint64_t branches_explored = 0;
  std::uint64_t branches_pruned = 0;
  std::uint64_t solutions_found = 0;
};

struct SolveOptions {
  unsigned jobs = 1;
  /// Re-derive the pruning threshold from the shrinking new-edge count
  /// instead of the initial m_add (strictly more aggressive, off by default).
  bool iterative_prune = false;
  /// Extra consistency checks while solving (used by tests).
  bool check_invariants = false;
};

struct PruneResult {
  std::vector<Edge> kept;
  std::vector<Edge> removed;  // in removal order
  // The same sets as positions in the instance's canonical new-edge order.
  std::vector<int> kept_indices;
  std::vector<int> removed_indices;
};

/// Drops new edges whose admissible-page count reaches the removal
/// threshold; they can always be re-inserted greedily afterwards. Requires a
/// spine placing all of V(G).
PruneResult prune_flexible_edges(const Instance& inst, const SpineOrder& spine,
                                 bool iterative = false);

/// Edges-only solver for a fully fixed spine: prune, branch over the
/// admissible pages of the survivors, re-insert the pruned edges.
std::optional<QueueLayout> solve_edges_only(const Instance& inst,
                                            const SpineOrder& spine,
                                            const SolveOptions& opts = {});

/// Placement enumeration on top of the edges-only solver. Deterministic:
/// reports the solution of the first successful placement in enumeration
/// order, for any jobs value.
std::optional<std::pair<QueueLayout, BranchStats>> solve_xp(
    const Instance& inst, const SolveOptions& opts = {},
    BranchStats* stats_out = nullptr);

namespace detail {
enum class EdgesOnlyOutcome { solved, unsolvable, empty_admissible };
struct EdgesOnlyResult {
  EdgesOnlyOutcome outcome;
  std::optional<QueueLayout> layout;
};
EdgesOnlyResult solve_edges_only_ex(const Instance& inst,
                                    const SpineOrder& spine,
                                    const SolveOptions& opts);
}  // namespace detail

}  // namespace qlext
