#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qlext/core.hpp"

namespace qlext::testing {

inline Graph make_graph(
    const std::vector<std::string>& verts,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  Graph g;
  for (const auto& v : verts) g.add_vertex(v);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

inline SpineOrder spine_of(const Graph& g,
                           const std::vector<std::string>& order) {
  std::vector<int> idx;
  idx.reserve(order.size());
  for (const auto& name : order) idx.push_back(*g.index_of(name));
  return SpineOrder(g.vertex_count(), idx);
}

/// Layout over all of g; `pages` parallel to g.edges(), 0-based.
inline QueueLayout layout_of(const Graph& g,
                             const std::vector<std::string>& spine, int ell,
                             const std::vector<int>& pages) {
  return QueueLayout{spine_of(g, spine), PageAssignment(ell, pages)};
}

inline Edge edge_of(const Graph& g, const std::string& a,
                    const std::string& b) {
  return Edge(*g.index_of(a), *g.index_of(b));
}

/// Deterministic bounded integer, independent of libstdc++ distributions.
inline int rand_below(std::mt19937& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

/// Random graph on n vertices named v0..v{n-1}; each pair is an edge with
/// probability num/den.
inline Graph random_graph(std::mt19937& rng, int n, int num, int den) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rand_below(rng, den) < num) g.add_edge(i, j);
  return g;
}

inline SpineOrder random_spine(std::mt19937& rng, int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rand_below(rng, i + 1)]);
  return SpineOrder(n, order);
}

/// Random valid layout: random spine, then first-fit pages (grows the page
/// count as needed, then pads to at least min_ell).
inline QueueLayout random_layout(std::mt19937& rng, const Graph& g,
                                 int min_ell) {
  SpineOrder spine = random_spine(rng, g.vertex_count());
  std::vector<int> pages(g.edge_count(), 0);
  int used = 0;
  for (int i = 0; i < g.edge_count(); ++i) {
    for (int p = 0;; ++p) {
      bool okay = true;
      for (int j = 0; j < i && okay; ++j)
        if (pages[j] == p && is_nesting(spine, g.edges()[i], g.edges()[j]))
          okay = false;
      if (okay) {
        pages[i] = p;
        used = std::max(used, p + 1);
        break;
      }
    }
  }
  return QueueLayout{spine, PageAssignment(std::max(used, min_ell), pages)};
}

/// Random QLE instance: sample G with a valid layout, mark `dv` random
/// vertices and `de` further edges as missing. The surviving layout of G is
/// always a witness, so the instance is solvable by construction.
inline Instance random_instance(std::mt19937& rng, int n, int num, int den,
                                int ell, int dv, int de) {
  Graph g;
  QueueLayout lg;
  while (true) {
    g = random_graph(rng, n, num, den);
    lg = random_layout(rng, g, 1);
    if (lg.assignment.page_count() <= ell) break;
  }
  std::vector<bool> drop_vertex(n, false);
  for (int t = 0; t < dv; ++t) drop_vertex[rand_below(rng, n)] = true;

  std::vector<bool> drop_edge(g.edge_count(), false);
  std::vector<int> candidates;
  for (int i = 0; i < g.edge_count(); ++i)
    if (!drop_vertex[g.edges()[i].u] && !drop_vertex[g.edges()[i].v])
      candidates.push_back(i);
  for (int t = 0; t < de && !candidates.empty(); ++t)
    drop_edge[candidates[rand_below(
        rng, static_cast<int>(candidates.size()))]] = true;

  Graph h;
  for (int v = 0; v < n; ++v)
    if (!drop_vertex[v]) h.add_vertex(g.name_of(v));
  std::vector<int> h_pages;
  for (int i = 0; i < g.edge_count(); ++i) {
    Edge e = g.edges()[i];
    if (drop_vertex[e.u] || drop_vertex[e.v] || drop_edge[i]) continue;
    h.add_edge(g.name_of(e.u), g.name_of(e.v));
    h_pages.push_back(lg.assignment.page(i));
  }
  std::vector<int> h_order;
  for (int v : lg.spine.order())
    if (!drop_vertex[v]) h_order.push_back(*h.index_of(g.name_of(v)));
  QueueLayout lh{SpineOrder(h.vertex_count(), h_order),
                 PageAssignment(ell, h_pages)};
  return Instance(ell, std::move(g), std::move(h), std::move(lh));
}

}  // namespace qlext::testing
