#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qlext/branch.hpp"
#include "qlext/core.hpp"

namespace qlext {

/// One branch of the two-missing-vertices solver: the gaps of the left and
/// right new vertex (u before v on the induced spine), which concrete vertex
/// plays u, and the page of the uv edge when it exists.
struct TwoVertexBranch {
  int gap_u = 0;
  int gap_v = 0;
  int role = 0;  // 0: the identifier-smaller new vertex plays u
  std::optional<int> page_uv;
};

/// Branch-local state once the spine and the uv page are fixed. `old_edges`
/// includes uv when assigned; `new_edges` are the remaining new edges.
struct TwoVertexContext {
  SpineOrder spine;
  std::vector<Edge> old_edges;
  std::vector<int> old_pages;
  std::vector<Edge> new_edges;
  AdmissiblePageTable table;
  int u = -1;
  int v = -1;
  int ell = 0;
};

struct SimpleCaseResult {
  bool infeasible = false;          // some P(e) is empty
  std::vector<int> removed;         // indices into the new-edge list
  std::vector<int> fallback_page;   // parallel to removed
};

/// Negative check plus the safe removals: an edge with an admissible page
/// that no conflicting new edge shares can always be added back on that page.
SimpleCaseResult simple_case_filter(const AdmissiblePageTable& table);

struct RemoveSafeResult {
  std::vector<int> surviving;
  std::vector<int> removed;  // in removal order
};

/// Removes every edge vx with u before x and at least two admissible pages,
/// then symmetrically every edge uy with y before v; survivors either have a
/// single admissible page or stretch past the other new vertex.
RemoveSafeResult reduce_remove_safe(const TwoVertexContext& ctx,
                                    const std::vector<char>& present);

/// Pages for the surviving edges: singletons take their page, the remaining
/// (pairwise non-nesting) edges dodge their singleton conflicts. Returns
/// pages parallel to ctx.new_edges with -1 for absent edges, or nothing.
std::optional<std::vector<int>> assign_residual(
    const TwoVertexContext& ctx, const std::vector<char>& present,
    const AdmissiblePageTable& table);

/// Replays remove-safe removals in reverse; when every admissible page of an
/// edge is taken by a conflicting chain, repaints the chain to free one (the
/// page-propagation step). A repaint failure raises internal_error.
void reinsert_removed(const TwoVertexContext& ctx,
                      const std::vector<int>& removal_log,
                      std::vector<int>& pages);

/// Polynomial-time solver for instances missing exactly two vertices and
/// their incident edges.
std::optional<std::pair<QueueLayout, BranchStats>> solve_two_vertices(
    const Instance& inst, const SolveOptions& opts = {},
    BranchStats* stats_out = nullptr);

/// Test seam: runs the reduction pipeline for one fixed spine and uv page.
std::optional<QueueLayout> run_two_vertex_branch(const Instance& inst,
                                                 const SpineOrder& spine,
                                                 std::optional<int> page_uv,
                                                 const SolveOptions& opts = {});

}  // namespace qlext
