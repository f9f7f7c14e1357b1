#include "qlext/fixed_order.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qlext {

namespace {

struct Interval {
  int lo, hi;
};

Interval interval_of(const SpineOrder& spine, Edge e) {
  int a = spine.rank(e.u), b = spine.rank(e.v);
  return {std::min(a, b), std::max(a, b)};
}

// Strict containment of spine intervals; equal endpoints never qualify.
bool contains(Interval outer, Interval inner) {
  return outer.lo < inner.lo && inner.hi < outer.hi;
}

void check_transitive(const std::vector<std::pair<int, int>>& directed,
                      int node_count, const char* label) {
  std::vector<std::vector<char>> has(node_count,
                                     std::vector<char>(node_count, 0));
  for (auto [a, b] : directed) has[a][b] = 1;
  for (auto [a, b] : directed)
    for (int c = 0; c < node_count; ++c)
      if (has[b][c] && !has[a][c])
        throw internal_error(std::string("orientation ") + label +
                             " is not transitive");
}

}  // namespace

ConflictGraph build_conflict_graph(const Graph& g, const SpineOrder& spine) {
  ConflictGraph cg;
  cg.nodes = g.edges();
  cg.adj.resize(cg.nodes.size());
  for (std::size_t i = 0; i < cg.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < cg.nodes.size(); ++j)
      if (is_nesting(spine, cg.nodes[i], cg.nodes[j])) {
        cg.conflict_pairs.emplace_back(static_cast<int>(i),
                                       static_cast<int>(j));
        cg.adj[i].push_back(static_cast<int>(j));
        cg.adj[j].push_back(static_cast<int>(i));
      }
  return cg;
}

OrientationWitness orient_witness(const ConflictGraph& cg,
                                  const SpineOrder& spine) {
  int n = static_cast<int>(cg.nodes.size());
  std::vector<Interval> iv(n);
  for (int i = 0; i < n; ++i) iv[i] = interval_of(spine, cg.nodes[i]);

  OrientationWitness w;
  for (auto [i, j] : cg.conflict_pairs) {
    if (contains(iv[i], iv[j]))
      w.forward.emplace_back(i, j);
    else if (contains(iv[j], iv[i]))
      w.forward.emplace_back(j, i);
    else
      throw internal_error("conflict pair without containment");
  }

  // Complement pairs ordered by (start, end); ties on start cannot nest.
  std::vector<std::vector<char>> conflicting(n, std::vector<char>(n, 0));
  for (auto [i, j] : cg.conflict_pairs)
    conflicting[i][j] = conflicting[j][i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (conflicting[i][j]) continue;
      bool i_first = iv[i].lo != iv[j].lo ? iv[i].lo < iv[j].lo
                                          : iv[i].hi < iv[j].hi;
      if (i_first)
        w.complement_forward.emplace_back(i, j);
      else
        w.complement_forward.emplace_back(j, i);
    }

  check_transitive(w.forward, n, "F");
  check_transitive(w.complement_forward, n, "F'");
  return w;
}

PermutationRealization realize_permutation(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<char> seen(n, 0);
  for (int r : perm) {
    if (r < 1 || r > n || seen[r - 1])
      throw validation_error("input is not a permutation of 1..n");
    seen[r - 1] = 1;
  }

  PermutationRealization real;
  // Vertices (v,1) first in element order, then (v,2) in permutation order.
  for (int v = 1; v <= n; ++v)
    real.base_graph.add_vertex("a" + std::to_string(v));
  for (int v = 1; v <= n; ++v)
    real.base_graph.add_vertex("b" + std::to_string(v));
  real.edge_of_element.resize(n);
  for (int v = 0; v < n; ++v)
    real.edge_of_element[v] = real.base_graph.add_edge(v, n + v);

  std::vector<int> order;
  order.reserve(2 * n);
  for (int v = 0; v < n; ++v) order.push_back(v);
  for (int pos = 0; pos < n; ++pos) order.push_back(n + (perm[pos] - 1));
  real.spine = SpineOrder(2 * n, order);
  return real;
}

std::pair<int, QueueLayout> fixed_order_min_pages(const Graph& g,
                                                  const SpineOrder& spine) {
  int m = g.edge_count();
  std::vector<Interval> iv(m);
  for (int i = 0; i < m; ++i) iv[i] = interval_of(spine, g.edges()[i]);

  // Sweep edges by (left asc, right desc); every container of an edge is
  // processed before it, so chain depths fall out of a single pass.
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (iv[a].lo != iv[b].lo) return iv[a].lo < iv[b].lo;
    return iv[a].hi > iv[b].hi;
  });

  std::vector<int> depth(m, 0);
  int pages = 0;
  for (int pos = 0; pos < m; ++pos) {
    int e = idx[pos];
    depth[e] = 1;
    for (int prev = 0; prev < pos; ++prev) {
      int f = idx[prev];
      if (contains(iv[f], iv[e])) depth[e] = std::max(depth[e], depth[f] + 1);
    }
    pages = std::max(pages, depth[e]);
  }

  std::vector<int> assignment(m);
  for (int i = 0; i < m; ++i) assignment[i] = depth[i] - 1;
  QueueLayout layout{spine, PageAssignment(pages, assignment)};
  return {pages, layout};
}

std::optional<QueueLayout> fixed_order_assign(
    const Graph& g, const SpineOrder& spine, int ell,
    const std::map<int, int>& precolored) {
  if (ell < 1) throw validation_error("page count must be at least 1");
  int m = g.edge_count();
  for (auto [edge, page] : precolored) {
    if (edge < 0 || edge >= m)
      throw validation_error("precolored edge index out of range");
    if (page < 0 || page >= ell)
      throw validation_error("precolored page out of range");
  }

  ConflictGraph cg = build_conflict_graph(g, spine);
  std::vector<int> page(m, -1);
  for (auto [edge, p] : precolored) page[edge] = p;
  for (auto [i, j] : cg.conflict_pairs)
    if (page[i] != -1 && page[i] == page[j]) return std::nullopt;

  std::vector<int> open;
  for (int i = 0; i < m; ++i)
    if (page[i] == -1) open.push_back(i);
  std::sort(open.begin(), open.end(), [&](int a, int b) {
    if (cg.adj[a].size() != cg.adj[b].size())
      return cg.adj[a].size() > cg.adj[b].size();
    return a < b;
  });

  // blocked[node][p] counts neighbors currently on page p; forward checking
  // prunes a branch as soon as some open node has no page left.
  std::vector<std::vector<int>> blocked(m, std::vector<int>(ell, 0));
  std::vector<int> candidates(m, ell);
  for (int i = 0; i < m; ++i)
    if (page[i] != -1)
      for (int nb : cg.adj[i])
        if (++blocked[nb][page[i]] == 1) --candidates[nb];
  for (int node : open)
    if (candidates[node] == 0) return std::nullopt;

  auto assign = [&](int node, int p, int delta) {
    for (int nb : cg.adj[node]) {
      if (delta > 0) {
        if (blocked[nb][p]++ == 0) --candidates[nb];
      } else {
        if (--blocked[nb][p] == 0) ++candidates[nb];
      }
    }
  };

  std::size_t at = 0;
  while (at < open.size()) {
    int node = open[at];
    bool advanced = false;
    int from = page[node] == -1 ? 0 : page[node] + 1;
    if (page[node] != -1) {
      assign(node, page[node], -1);
      page[node] = -1;
    }
    for (int p = from; p < ell; ++p) {
      if (blocked[node][p] > 0) continue;
      page[node] = p;
      assign(node, p, +1);
      bool dead = false;
      for (std::size_t rest = at + 1; rest < open.size() && !dead; ++rest)
        if (candidates[open[rest]] == 0) dead = true;
      if (!dead) {
        advanced = true;
        break;
      }
      assign(node, p, -1);
      page[node] = -1;
    }
    if (advanced) {
      ++at;
    } else {
      if (at == 0) return std::nullopt;
      --at;
    }
  }

  return QueueLayout{spine, PageAssignment(ell, page)};
}

}  // namespace qlext
