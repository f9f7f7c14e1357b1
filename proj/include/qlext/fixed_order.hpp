#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qlext/core.hpp"

namespace qlext {

/// Conflict graph C(G, spine): one node per edge of G, adjacency = nesting
/// relation under the fixed spine. Always a permutation graph.
struct ConflictGraph {
  std::vector<Edge> nodes;                          // = g.edges()
  std::vector<std::pair<int, int>> conflict_pairs;  // i < j node indices
  std::vector<std::vector<int>> adj;
};

ConflictGraph build_conflict_graph(const Graph& g, const SpineOrder& spine);

/// Two transitive orientations witnessing that the conflict graph is a
/// permutation graph: F directs each conflict edge from the outer (nesting)
/// edge to the inner (nested) one; F' directs each complement pair from the
/// edge that starts earlier on the spine to the one that starts later.
struct OrientationWitness {
  std::vector<std::pair<int, int>> forward;             // F, directed
  std::vector<std::pair<int, int>> complement_forward;  // F', directed
};

/// Builds both orientations and verifies transitivity; a failed check raises
/// internal_error since it can only come from a bug.
OrientationWitness orient_witness(const ConflictGraph& cg,
                                  const SpineOrder& spine);

/// The reverse construction Q(pi): a graph whose nesting pairs under the
/// derived spine are exactly the inversions of pi. Element i corresponds to
/// the edge between its two vertex copies.
struct PermutationRealization {
  Graph base_graph;
  SpineOrder spine;
  std::vector<int> edge_of_element;  // element (0-based) -> edge index
};

/// `perm` lists element ranks 1..n in permutation order.
PermutationRealization realize_permutation(const std::vector<int>& perm);

/// Minimum page count over this spine (the maximum rainbow size) plus a
/// witness layout assigning each edge the depth of its containment chain.
std::pair<int, QueueLayout> fixed_order_min_pages(const Graph& g,
                                                  const SpineOrder& spine);

/// Exact search for a valid ell-page assignment extending `precolored`
/// (edge index -> 0-based page). Exponential worst case by design.
std::optional<QueueLayout> fixed_order_assign(
    const Graph& g, const SpineOrder& spine, int ell,
    const std::map<int, int>& precolored);

}  // namespace qlext
