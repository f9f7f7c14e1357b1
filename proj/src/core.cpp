#include "qlext/core.hpp"

#include <algorithm>
#include <map>

namespace qlext {

bool is_nesting(const SpineOrder& spine, Edge e1, Edge e2) {
  if (e1.shares_endpoint(e2)) return false;
  int a1 = spine.rank(e1.u), b1 = spine.rank(e1.v);
  int a2 = spine.rank(e2.u), b2 = spine.rank(e2.v);
  int lo1 = std::min(a1, b1), hi1 = std::max(a1, b1);
  int lo2 = std::min(a2, b2), hi2 = std::max(a2, b2);
  return (lo1 < lo2 && hi2 < hi1) || (lo2 < lo1 && hi1 < hi2);
}

ValidationReport validate_layout(const Graph& g, const QueueLayout& layout,
                                 std::size_t max_violations) {
  if (layout.spine.size() != g.vertex_count() ||
      layout.spine.universe_size() != g.vertex_count())
    throw validation_error("layout spine does not cover the graph's vertices");
  if (layout.assignment.size() != g.edge_count())
    throw validation_error("layout assigns " +
                           std::to_string(layout.assignment.size()) +
                           " edges, graph has " +
                           std::to_string(g.edge_count()));

  // Bucket edges per page, then test pairs inside each bucket.
  std::vector<std::vector<int>> by_page(layout.assignment.page_count());
  for (int i = 0; i < g.edge_count(); ++i)
    by_page[layout.assignment.page(i)].push_back(i);

  ValidationReport report;
  for (const auto& bucket : by_page) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      for (std::size_t j = i + 1; j < bucket.size(); ++j) {
        if (is_nesting(layout.spine, g.edges()[bucket[i]],
                       g.edges()[bucket[j]])) {
          report.ok = false;
          if (report.violations.size() < max_violations)
            report.violations.emplace_back(bucket[i], bucket[j]);
          else
            return report;
        }
      }
    }
  }
  return report;
}

bool extends(const Graph& g, const QueueLayout& layout_g, const Graph& h,
             const QueueLayout& layout_h) {
  // Relative order of every pair of H vertices must be preserved.
  std::vector<int> h_to_g(h.vertex_count());
  for (int v = 0; v < h.vertex_count(); ++v) {
    auto gi = g.index_of(h.name_of(v));
    if (!gi) return false;
    h_to_g[v] = *gi;
  }
  std::vector<int> g_rank_of_h(h.vertex_count());
  for (int v = 0; v < h.vertex_count(); ++v) {
    if (!layout_g.spine.contains(h_to_g[v])) return false;
    g_rank_of_h[v] = layout_g.spine.rank(h_to_g[v]);
  }
  for (int a = 0; a < h.vertex_count(); ++a)
    for (int b = a + 1; b < h.vertex_count(); ++b)
      if ((layout_h.spine.rank(a) < layout_h.spine.rank(b)) !=
          (g_rank_of_h[a] < g_rank_of_h[b]))
        return false;

  // Each H edge keeps its page. With parallel edges the page multiset of
  // every endpoint pair in H must be contained in G's.
  std::map<Edge, std::vector<int>> h_pages, g_pages;
  for (int i = 0; i < h.edge_count(); ++i) {
    Edge e = h.edges()[i];
    h_pages[Edge(h_to_g[e.u], h_to_g[e.v])].push_back(
        layout_h.assignment.page(i));
  }
  for (int i = 0; i < g.edge_count(); ++i)
    g_pages[g.edges()[i]].push_back(layout_g.assignment.page(i));
  for (auto& [e, pages] : h_pages) {
    auto it = g_pages.find(e);
    if (it == g_pages.end()) return false;
    std::vector<int> have = it->second;
    std::sort(have.begin(), have.end());
    std::sort(pages.begin(), pages.end());
    if (!std::includes(have.begin(), have.end(), pages.begin(), pages.end()))
      return false;
  }
  return true;
}

bool sees(const Graph& g, const QueueLayout& layout, int u, int v, int p) {
  if (u == v) throw precondition_error("sees: identical endpoints");
  if (p < 0 || p >= layout.assignment.page_count())
    throw precondition_error("sees: page index out of range");
  Edge probe(u, v);
  for (int i = 0; i < g.edge_count(); ++i) {
    if (layout.assignment.page(i) != p) continue;
    if (is_nesting(layout.spine, probe, g.edges()[i])) return false;
  }
  return true;
}

Instance::Instance(int ell, Graph g, Graph h, QueueLayout layout_h,
                   bool require_valid_h)
    : ell_(ell),
      g_(std::move(g)),
      h_(std::move(h)),
      layout_h_(std::move(layout_h)) {
  if (ell_ < 1) throw validation_error("page count must be at least 1");
  if (layout_h_.assignment.page_count() != ell_)
    throw validation_error("layout of H uses a different page count than ell");
  if (layout_h_.spine.size() != h_.vertex_count())
    throw validation_error("layout of H does not cover V(H)");
  if (layout_h_.assignment.size() != h_.edge_count())
    throw validation_error("layout of H does not cover E(H)");

  // Map H into G's index space.
  std::vector<int> h_to_g(h_.vertex_count());
  for (int v = 0; v < h_.vertex_count(); ++v) {
    auto gi = g_.index_of(h_.name_of(v));
    if (!gi)
      throw validation_error("H vertex '" + h_.name_of(v) + "' not in G");
    h_to_g[v] = *gi;
  }

  h_vertices_.resize(h_.vertex_count());
  for (int v = 0; v < h_.vertex_count(); ++v)
    h_vertices_[layout_h_.spine.rank(v)] = h_to_g[v];
  h_spine_in_g_ = SpineOrder(g_.vertex_count(), h_vertices_);

  old_flag_.assign(g_.vertex_count(), false);
  for (int v : h_vertices_) old_flag_[v] = true;
  for (int v = 0; v < g_.vertex_count(); ++v)
    if (!old_flag_[v]) new_vertices_.push_back(v);

  old_edges_.reserve(h_.edge_count());
  old_pages_.reserve(h_.edge_count());
  std::map<Edge, int> h_multiplicity;
  for (int i = 0; i < h_.edge_count(); ++i) {
    Edge he = h_.edges()[i];
    Edge ge(h_to_g[he.u], h_to_g[he.v]);
    old_edges_.push_back(ge);
    old_pages_.push_back(layout_h_.assignment.page(i));
    ++h_multiplicity[ge];
  }

  // E_add is the multiset difference E(G) \ E(H).
  for (const Edge& e : g_.edges()) {
    auto it = h_multiplicity.find(e);
    if (it != h_multiplicity.end() && it->second > 0) {
      --it->second;
    } else {
      new_edges_.push_back(e);
    }
  }
  for (auto& [e, count] : h_multiplicity)
    if (count > 0)
      throw validation_error("edge " + g_.name_of(e.u) + "--" +
                             g_.name_of(e.v) + " of H is not in G");
  std::sort(new_edges_.begin(), new_edges_.end());

  for (const Edge& e : new_edges_)
    if (old_flag_[e.u] && old_flag_[e.v]) new_edges_old_.push_back(e);

  // Positional match of the old and new edge lists against G's edge list;
  // parallel copies pair up in list order.
  {
    std::vector<int> old_sorted(old_edges_.size());
    for (std::size_t i = 0; i < old_sorted.size(); ++i)
      old_sorted[i] = static_cast<int>(i);
    std::stable_sort(old_sorted.begin(), old_sorted.end(),
                     [&](int a, int b) { return old_edges_[a] < old_edges_[b]; });
    std::vector<int> g_sorted(g_.edge_count());
    for (int i = 0; i < g_.edge_count(); ++i) g_sorted[i] = i;
    std::stable_sort(g_sorted.begin(), g_sorted.end(), [&](int a, int b) {
      return g_.edges()[a] < g_.edges()[b];
    });
    old_edge_g_index_.resize(old_edges_.size());
    new_edge_g_index_.resize(new_edges_.size());
    std::size_t old_at = 0, new_at = 0;
    for (int idx : g_sorted) {
      Edge e = g_.edges()[idx];
      if (old_at < old_sorted.size() && old_edges_[old_sorted[old_at]] == e) {
        old_edge_g_index_[old_sorted[old_at]] = idx;
        ++old_at;
      } else {
        if (new_at >= new_edges_.size() || new_edges_[new_at] != e)
          throw internal_error("edge bookkeeping mismatch in Instance");
        new_edge_g_index_[new_at] = idx;
        ++new_at;
      }
    }
  }

  if (require_valid_h) {
    auto report = validate_layout(h_, layout_h_, 1);
    if (!report.ok)
      throw validation_error("the given layout of H is not a queue layout");
  }
}

AdmissiblePageTable compute_admissible(std::span<const Edge> old_edges,
                                       std::span<const int> old_pages, int ell,
                                       std::span<const Edge> new_edges,
                                       const SpineOrder& spine) {
  AdmissiblePageTable table;
  table.admissible.resize(new_edges.size());
  table.conflicts.resize(new_edges.size());
  std::vector<char> blocked(ell);
  for (std::size_t i = 0; i < new_edges.size(); ++i) {
    std::fill(blocked.begin(), blocked.end(), 0);
    for (std::size_t j = 0; j < old_edges.size(); ++j)
      if (is_nesting(spine, new_edges[i], old_edges[j]))
        blocked[old_pages[j]] = 1;
    for (int p = 0; p < ell; ++p)
      if (!blocked[p]) table.admissible[i].push_back(p);
    for (std::size_t j = 0; j < new_edges.size(); ++j)
      if (j != i && is_nesting(spine, new_edges[i], new_edges[j]))
        table.conflicts[i].push_back(static_cast<int>(j));
  }
  return table;
}

AdmissiblePageTable admissible_pages(const Instance& inst,
                                     const SpineOrder& spine) {
  if (!spine_extends_h(inst, spine))
    throw precondition_error(
        "admissible_pages needs a full spine extending the spine of H");
  return compute_admissible(inst.old_edges(), inst.old_pages(), inst.ell(),
                            inst.new_edges(), spine);
}

QueueLayout combine_layout(const Instance& inst, const SpineOrder& spine,
                           const std::vector<int>& new_pages) {
  if (new_pages.size() != inst.new_edges().size())
    throw precondition_error("combine_layout needs a page per new edge");
  std::vector<int> pages(inst.g().edge_count(), -1);
  for (std::size_t i = 0; i < inst.old_edges().size(); ++i)
    pages[inst.old_edge_g_indices()[i]] = inst.old_pages()[i];
  for (std::size_t i = 0; i < inst.new_edges().size(); ++i)
    pages[inst.new_edge_g_indices()[i]] = new_pages[i];
  return QueueLayout{spine, PageAssignment(inst.ell(), pages)};
}

bool spine_extends_h(const Instance& inst, const SpineOrder& spine) {
  if (spine.size() != inst.g().vertex_count() ||
      spine.universe_size() != inst.g().vertex_count())
    return false;
  const auto& h_order = inst.h_vertices();
  for (std::size_t i = 1; i < h_order.size(); ++i)
    if (spine.rank(h_order[i - 1]) >= spine.rank(h_order[i])) return false;
  return true;
}

}  // namespace qlext
