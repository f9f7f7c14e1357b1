#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qlext/graph.hpp"

namespace qlext {

/// True iff one edge's spine interval strictly contains the other's.
/// Edges sharing an endpoint are never in a nesting relation.
bool is_nesting(const SpineOrder& spine, Edge e1, Edge e2);

struct ValidationReport {
  bool ok = true;
  /// Violating same-page pairs, as indices into the graph's edge list.
  std::vector<std::pair<int, int>> violations;
};

/// Checks that no two edges on the same page nest. The layout must cover
/// exactly the graph's vertices and edges; a coverage mismatch raises a
/// validation_error (structural, distinct from mere invalidity).
ValidationReport validate_layout(const Graph& g, const QueueLayout& layout,
                                 std::size_t max_violations = SIZE_MAX);

/// True iff layout_g keeps every H-edge's page and every H-vertex pair's
/// relative order. Vertices are matched by token.
bool extends(const Graph& g, const QueueLayout& layout_g, const Graph& h,
             const QueueLayout& layout_h);

/// True iff adding edge uv on page p keeps the layout valid.
bool sees(const Graph& g, const QueueLayout& layout, int u, int v, int p);

/// A QLE problem: page count, full graph G, subgraph H and a fixed layout
/// of H. All derived data lives in G's index space.
class Instance {
 public:
  Instance(int ell, Graph g, Graph h, QueueLayout layout_h,
           bool require_valid_h = true);

  int ell() const { return ell_; }
  const Graph& g() const { return g_; }
  const Graph& h() const { return h_; }
  const QueueLayout& layout_h() const { return layout_h_; }

  /// Old vertices as G indices, in spine order of H.
  const std::vector<int>& h_vertices() const { return h_vertices_; }
  /// Old edges in G space, parallel to old_pages().
  const std::vector<Edge>& old_edges() const { return old_edges_; }
  const std::vector<int>& old_pages() const { return old_pages_; }

  /// New vertices, ascending G indices.
  const std::vector<int>& new_vertices() const { return new_vertices_; }
  /// New edges in canonical (sorted) order; base for all branch counters.
  const std::vector<Edge>& new_edges() const { return new_edges_; }
  /// New edges whose both endpoints are old.
  const std::vector<Edge>& new_edges_with_old_endpoints() const {
    return new_edges_old_;
  }

  int n_add() const { return static_cast<int>(new_vertices_.size()); }
  int m_add() const { return static_cast<int>(new_edges_.size()); }
  int kappa() const { return n_add() + m_add(); }

  /// Position of each old edge (parallel to old_edges()) in G's edge list;
  /// parallel copies are matched positionally.
  const std::vector<int>& old_edge_g_indices() const {
    return old_edge_g_index_;
  }
  /// Same for the canonical new-edge order.
  const std::vector<int>& new_edge_g_indices() const {
    return new_edge_g_index_;
  }

  bool is_old_vertex(int v) const { return old_flag_.at(v); }
  bool has_parallel_edges() const {
    return g_.has_parallel_edges() || h_.has_parallel_edges();
  }

  /// Partial spine over G's universe covering exactly the old vertices.
  const SpineOrder& h_spine_in_g() const { return h_spine_in_g_; }

 private:
  int ell_;
  Graph g_;
  Graph h_;
  QueueLayout layout_h_;
  std::vector<int> h_vertices_;
  std::vector<Edge> old_edges_;
  std::vector<int> old_pages_;
  std::vector<int> new_vertices_;
  std::vector<Edge> new_edges_;
  std::vector<Edge> new_edges_old_;
  std::vector<bool> old_flag_;
  std::vector<int> old_edge_g_index_;
  std::vector<int> new_edge_g_index_;
  SpineOrder h_spine_in_g_;
};

/// Layout of G from a full spine plus pages for the new edges (parallel to
/// the instance's canonical new-edge order); old edges keep the pages of the
/// layout of H.
QueueLayout combine_layout(const Instance& inst, const SpineOrder& spine,
                           const std::vector<int>& new_pages);

/// Per new edge: the admissible pages P(e) (pages holding no old edge in a
/// nesting relation with e) and the conflicting new edges that nest with it.
/// Rows are parallel to the new-edge list the table was computed for.
struct AdmissiblePageTable {
  std::vector<std::vector<int>> admissible;  // sorted 0-based pages
  std::vector<std::vector<int>> conflicts;   // indices into the new-edge list
};

/// Kernel shared by all solvers: admissible pages against an explicit set of
/// placed edges. Runs in O(m_add * (m_old + m_add + ell)).
AdmissiblePageTable compute_admissible(std::span<const Edge> old_edges,
                                       std::span<const int> old_pages, int ell,
                                       std::span<const Edge> new_edges,
                                       const SpineOrder& spine);

/// Table for the instance's new edges under a spine that extends the spine
/// of H and places all of V(G).
AdmissiblePageTable admissible_pages(const Instance& inst,
                                     const SpineOrder& spine);

/// True iff `spine` places all of V(G) and preserves the relative order of
/// all old vertices.
bool spine_extends_h(const Instance& inst, const SpineOrder& spine);

}  // namespace qlext
