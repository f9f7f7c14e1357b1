#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qlext/core.hpp"

namespace qlext {

/// Multicolored Clique input: a graph whose vertices are partitioned into
/// k independent, non-empty color classes (colors 1..k).
struct MccInstance {
  Graph graph;
  int k = 0;
  std::vector<int> color_of;  // per vertex index, 1..k
};

/// Raises validation_error when the classes do not partition the vertices,
/// are empty, or are not independent.
void validate_mcc(const MccInstance& mcc);

/// Direct enumeration of colorful k-cliques, used as the fidelity oracle.
bool has_colorful_clique(const MccInstance& mcc);

/// The produced QLE instance plus the bookkeeping needed to state the
/// gadget properties on a concrete solution. Pages are 0-based here; page
/// t hosts the gadget of the t-th clique-graph edge (lexicographic by
/// endpoint tokens) and dummy_page hosts the fixation gadget.
struct ReductionArtifacts {
  Instance instance;
  bool multi_form = false;
  int dummy_page = 0;
  std::vector<std::pair<std::string, std::string>>
      interval_of;                        // per clique-graph vertex
  std::vector<int> page_of_edge;          // per clique-graph edge index
  std::vector<std::string> new_vertices;  // x_1..x_k
  std::vector<std::string> bot;           // per color 1..k+1 (0-based slot)
  // Left/right separator tokens per color and gadget page; in the
  // multi-edge form every page shares one token.
  std::vector<std::vector<std::string>> bot_left;
  std::vector<std::vector<std::string>> bot_right;
  // Copy tokens per color: copy_token[alpha-1][i-1] is the i-th copy,
  // including the closing dummy at position n_alpha.
  std::vector<std::vector<std::string>> copy_token;
  // Per clique-graph vertex: its color and 1-based index within the color.
  std::vector<std::pair<int, int>> vertex_slot;
  // Per clique-graph edge: the two vertex indices.
  std::vector<std::pair<int, int>> gc_edges;
};

/// Builds the hardness instance for a Multicolored Clique input. With
/// simple=false the subgraph H may contain parallel edges (one gadget edge
/// per page); simple=true redistributes them over per-page separator copies.
ReductionArtifacts reduce_mcc(const MccInstance& mcc, bool simple);

struct ReductionCheckReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the gadget properties on a concrete solution layout: every new
/// vertex sits strictly inside an interval of its own color, fixation edges
/// sit exactly on the dummy page, clique edges sit on pages whose
/// clique-graph edge joins the placed intervals, and the separator
/// visibility claims hold at sampled spine positions.
ReductionCheckReport verify_reduction_properties(const ReductionArtifacts& art,
                                                 const QueueLayout& solution);

struct RandomGenConfig {
  int vertex_count = 6;
  double edge_probability = 0.5;
  int page_count = 2;
  // Deletion policy: how much to strip from G to form H.
  int delete_vertices = 1;
  int delete_edges = 0;
  // Lower ell to the pages H actually uses; the new edges may then no
  // longer fit, which is how unsolvable instances arise.
  bool shrink_pages = false;
  std::uint32_t seed = 0;
};

struct GeneratedInstance {
  Instance instance;
  bool known_solvable = false;
};

/// Seed-deterministic random instance: samples G with a valid layout, then
/// deletes vertices and edges to form H.
GeneratedInstance gen_random(const RandomGenConfig& cfg);

}  // namespace qlext
