#include "qlext/twosat.hpp"

#include <algorithm>

#include "qlext/parallel.hpp"

namespace qlext {

namespace {

// Iterative Tarjan over the implication graph; node 2v is the positive
// literal of v, node 2v+1 its negation.
struct SccResult {
  std::vector<int> comp;
  int count = 0;
};

SccResult tarjan(int nodes, const std::vector<std::vector<int>>& out) {
  SccResult result;
  result.comp.assign(nodes, -1);
  std::vector<int> index(nodes, -1), low(nodes, 0);
  std::vector<char> on_stack(nodes, 0);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int node;
    std::size_t edge;
  };
  std::vector<Frame> frames;
  for (int root = 0; root < nodes; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      int v = frame.node;
      if (frame.edge < out[v].size()) {
        int w = out[v][frame.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            result.comp[w] = result.count;
            if (w == v) break;
          }
          ++result.count;
        }
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().node;
          low[parent] = std::min(low[parent], low[v]);
        }
      }
    }
  }
  return result;
}

int node_of(Lit lit) { return 2 * lit.var + (lit.positive ? 0 : 1); }
int negation_of(int node) { return node ^ 1; }

}  // namespace

std::optional<std::vector<bool>> solve_2sat(const TwoSatFormula& f) {
  int nodes = 2 * f.variable_count;
  std::vector<std::vector<int>> out(nodes);
  for (const auto& [a, b] : f.clauses) {
    if (a.var < 0 || a.var >= f.variable_count || b.var < 0 ||
        b.var >= f.variable_count)
      throw validation_error("clause references a variable out of range");
    out[negation_of(node_of(a))].push_back(node_of(b));
    out[negation_of(node_of(b))].push_back(node_of(a));
  }
  SccResult scc = tarjan(nodes, out);
  std::vector<bool> value(f.variable_count);
  for (int v = 0; v < f.variable_count; ++v) {
    if (scc.comp[2 * v] == scc.comp[2 * v + 1]) return std::nullopt;
    // Tarjan numbers components in reverse topological order; pick the
    // literal whose component comes later in topological order.
    value[v] = scc.comp[2 * v] < scc.comp[2 * v + 1];
  }
  return value;
}

namespace {

struct OrderOracle {
  const Instance* inst;
  std::vector<int> h_rank;   // per G vertex, or -1
  std::vector<int> eo_rank;  // per G vertex, or -1

  // "a before b", when already determined by the spine of H or the endpoint
  // order.
  std::optional<bool> known(int a, int b) const {
    if (h_rank[a] != -1 && h_rank[b] != -1) return h_rank[a] < h_rank[b];
    if (eo_rank[a] != -1 && eo_rank[b] != -1) return eo_rank[a] < eo_rank[b];
    return std::nullopt;
  }
};

struct Tri {
  enum Kind { kTrue, kFalse, kVar } kind = kTrue;
  Lit lit;

  static Tri constant(bool b) { return {b ? kTrue : kFalse, {}}; }
  static Tri variable(Lit l) { return {kVar, l}; }
  Tri negated() const {
    if (kind == kVar) return {kVar, Lit{lit.var, !lit.positive}};
    return {kind == kTrue ? kFalse : kTrue, {}};
  }
};

}  // namespace

std::vector<int> endpoint_order_domain_old(const Instance& inst) {
  std::vector<char> in_domain(inst.g().vertex_count(), 0);
  for (const Edge& e : inst.new_edges()) {
    bool has_new = !inst.is_old_vertex(e.u) || !inst.is_old_vertex(e.v);
    if (!has_new) continue;
    if (inst.is_old_vertex(e.u)) in_domain[e.u] = 1;
    if (inst.is_old_vertex(e.v)) in_domain[e.v] = 1;
  }
  std::vector<int> domain;
  for (int v : inst.h_vertices())
    if (in_domain[v]) domain.push_back(v);
  return domain;
}

std::uint64_t endpoint_order_count(const Instance& inst) {
  std::uint64_t w = endpoint_order_domain_old(inst).size();
  std::uint64_t total = 1;
  for (int i = 1; i <= inst.n_add(); ++i) {
    std::uint64_t radix = w + static_cast<std::uint64_t>(i);
    if (total > UINT64_MAX / radix)
      throw error("endpoint order count does not fit in 64 bits");
    total *= radix;
  }
  return total;
}

EndpointOrder endpoint_order_at(const Instance& inst, std::uint64_t index) {
  std::vector<int> w = endpoint_order_domain_old(inst);
  int n = inst.n_add();
  std::vector<std::uint64_t> digits(n);
  for (int i = n - 1; i >= 0; --i) {
    std::uint64_t radix = w.size() + static_cast<std::uint64_t>(i) + 1;
    digits[i] = index % radix;
    index /= radix;
  }
  if (index != 0)
    throw precondition_error("endpoint order index out of range");
  EndpointOrder eo{std::move(w)};
  for (int i = 0; i < n; ++i)
    eo.order.insert(eo.order.begin() + static_cast<long>(digits[i]),
                    inst.new_vertices()[i]);
  return eo;
}

std::optional<Encoding> encode_instance(const Instance& inst,
                                        const std::vector<int>& sigma,
                                        const EndpointOrder& eo) {
  const Graph& g = inst.g();
  if (static_cast<int>(sigma.size()) != g.edge_count())
    throw validation_error("sigma must assign every edge of G a page");
  for (int p : sigma)
    if (p < 0 || p >= inst.ell())
      throw validation_error("sigma assigns a page out of range");

  OrderOracle oracle{&inst, std::vector<int>(g.vertex_count(), -1),
                     std::vector<int>(g.vertex_count(), -1)};
  for (std::size_t i = 0; i < inst.h_vertices().size(); ++i)
    oracle.h_rank[inst.h_vertices()[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < eo.order.size(); ++i) {
    int v = eo.order[i];
    if (v < 0 || v >= g.vertex_count() || oracle.eo_rank[v] != -1)
      throw validation_error("endpoint order is not a vertex sequence");
    oracle.eo_rank[v] = static_cast<int>(i);
  }
  for (int v : inst.new_vertices())
    if (oracle.eo_rank[v] == -1)
      throw validation_error("endpoint order must place every new vertex");
  // Old endpoints of new edges may be placed or left free; the formula
  // carries variables for whatever the order leaves open.
  // Old members must agree with the spine of H.
  {
    int prev = -1;
    for (int v : eo.order) {
      if (oracle.h_rank[v] == -1) continue;
      if (prev != -1 && oracle.h_rank[v] <= prev)
        throw validation_error(
            "endpoint order contradicts the spine order of H");
      prev = oracle.h_rank[v];
    }
  }

  Encoding enc;
  // Variables for the undetermined (new, old) pairs, semantics "new before
  // old".
  for (int u : inst.new_vertices())
    for (int w : inst.h_vertices())
      if (oracle.eo_rank[w] == -1)
        enc.vars.var_of[{u, w}] = enc.formula.variable_count++;

  auto order_tri = [&](int a, int b) -> Tri {
    if (auto k = oracle.known(a, b)) return Tri::constant(*k);
    bool a_new = !inst.is_old_vertex(a);
    if (a_new) return Tri::variable(Lit{enc.vars.var_of.at({a, b}), true});
    return Tri::variable(Lit{enc.vars.var_of.at({b, a}), true}).negated();
  };

  bool feasible = true;
  // A implies B, with constant simplification.
  auto add_implication = [&](Tri a, Tri b) {
    if (!feasible) return;
    if (a.kind == Tri::kFalse || b.kind == Tri::kTrue) return;
    if (a.kind == Tri::kTrue && b.kind == Tri::kFalse) {
      feasible = false;
      return;
    }
    if (a.kind == Tri::kTrue) {
      enc.formula.add_unit(b.lit);
    } else if (b.kind == Tri::kFalse) {
      enc.formula.add_unit(Lit{a.lit.var, !a.lit.positive});
    } else {
      enc.formula.add_implication(a.lit, b.lit);
    }
  };

  // Consistency of the decoded order with the endpoint order: u before v
  // among new vertices forces "v before w implies u before w" for old w.
  {
    std::vector<int> new_in_eo;
    for (int v : eo.order)
      if (!inst.is_old_vertex(v)) new_in_eo.push_back(v);
    for (std::size_t i = 1; i < new_in_eo.size(); ++i) {
      int u = new_in_eo[i - 1], v = new_in_eo[i];
      for (int w : inst.h_vertices()) {
        if (oracle.eo_rank[w] != -1) continue;
        add_implication(order_tri(v, w), order_tri(u, w));
      }
    }
  }

  // Consistency with the spine of H: it suffices to chain consecutive old
  // vertices.
  for (int u : inst.new_vertices()) {
    const auto& h_order = inst.h_vertices();
    for (std::size_t i = 1; i < h_order.size(); ++i) {
      Tri a = order_tri(u, h_order[i - 1]);
      Tri b = order_tri(u, h_order[i]);
      if (a.kind == Tri::kTrue && b.kind == Tri::kFalse)
        throw internal_error("endpoint order broke the old-vertex chain");
      add_implication(a, b);
    }
  }

  // Same-page non-nesting. Among the six endpoint-order pairs of any two
  // edges at least the new-new and old-old ones are determined, and the
  // consistency clauses above rule out cyclic assignments of the free ones.
  // Every remaining nesting pattern therefore collapses to a clause on at
  // most two free literals, which a small exact synthesis step finds (and
  // whose failure would mean the encoding cannot exist, hence the internal
  // error).
  auto encode_pair = [&](Edge e1, Edge e2) {
    int points[4] = {e1.u, e1.v, e2.u, e2.v};
    struct FreePair {
      int a, b;  // indices into points
      Lit lit;   // truth of lit means points[a] precedes points[b]
    };
    std::vector<FreePair> frees;
    // before[a][b]: tri-state order of the four points.
    int det[4][4];  // -1 unknown, 0 false, 1 true
    int free_at[4][4];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) det[a][b] = -1, free_at[a][b] = -1;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        Tri t = order_tri(points[a], points[b]);
        if (t.kind == Tri::kVar) {
          free_at[a][b] = static_cast<int>(frees.size());
          frees.push_back({a, b, t.lit});
        } else {
          det[a][b] = t.kind == Tri::kTrue ? 1 : 0;
          det[b][a] = 1 - det[a][b];
        }
      }

    // Enumerate assignments of the free pairs; keep the nesting ones.
    std::vector<std::uint32_t> forbidden, allowed;
    int f = static_cast<int>(frees.size());
    for (std::uint32_t mask = 0; mask < (1u << f); ++mask) {
      bool before[4][4] = {};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != b) {
            if (det[a][b] != -1) {
              before[a][b] = det[a][b] == 1;
            } else if (free_at[a][b] != -1) {
              before[a][b] = (mask >> free_at[a][b]) & 1;
            } else {
              before[a][b] = !((mask >> free_at[b][a]) & 1);
            }
          }
      // Transitivity check; cyclic assignments are unreachable anyway.
      bool consistent = true;
      for (int a = 0; a < 4 && consistent; ++a)
        for (int b = 0; b < 4 && consistent; ++b)
          for (int w = 0; w < 4 && consistent; ++w)
            if (a != b && b != w && a != w && before[a][b] && before[b][w] &&
                !before[a][w])
              consistent = false;
      if (!consistent) continue;
      // positions of the four points
      int pos[4];
      for (int a = 0; a < 4; ++a) {
        pos[a] = 0;
        for (int b = 0; b < 4; ++b)
          if (a != b && before[b][a]) ++pos[a];
      }
      int lo1 = std::min(pos[0], pos[1]), hi1 = std::max(pos[0], pos[1]);
      int lo2 = std::min(pos[2], pos[3]), hi2 = std::max(pos[2], pos[3]);
      bool nests = (lo1 < lo2 && hi2 < hi1) || (lo2 < lo1 && hi1 < hi2);
      (nests ? forbidden : allowed).push_back(mask);
    }
    if (forbidden.empty()) return;
    if (f == 0) {
      feasible = false;  // fully determined and nesting
      return;
    }

    // Candidate clauses over the free pairs: units and two-literal clauses.
    // A candidate survives if it excludes no allowed assignment; greedy
    // selection must cover every forbidden assignment.
    struct Candidate {
      int i, j;        // free indices, j == -1 for units
      bool vi, vj;     // the literal asserts free == vi (resp. vj)
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i < f; ++i)
      for (bool vi : {false, true}) candidates.push_back({i, -1, vi, false});
    for (int i = 0; i < f; ++i)
      for (int j = i + 1; j < f; ++j)
        for (bool vi : {false, true})
          for (bool vj : {false, true}) candidates.push_back({i, j, vi, vj});
    auto satisfies = [&](const Candidate& cand, std::uint32_t mask) {
      bool a = ((mask >> cand.i) & 1) == cand.vi;
      bool b = cand.j != -1 && ((mask >> cand.j) & 1) == cand.vj;
      return a || b;
    };
    std::vector<char> covered(forbidden.size(), 0);
    std::size_t remaining = forbidden.size();
    for (const Candidate& cand : candidates) {
      if (remaining == 0) break;
      bool safe = true;
      for (std::uint32_t mask : allowed)
        if (!satisfies(cand, mask)) {
          safe = false;
          break;
        }
      if (!safe) continue;
      bool useful = false;
      for (std::size_t t = 0; t < forbidden.size(); ++t)
        if (!covered[t] && !satisfies(cand, forbidden[t])) {
          covered[t] = 1;
          --remaining;
          useful = true;
        }
      if (!useful) continue;
      auto as_lit = [&](int idx, bool value) {
        Lit lit = frees[idx].lit;
        return value ? lit : Lit{lit.var, !lit.positive};
      };
      if (cand.j == -1)
        enc.formula.add_unit(as_lit(cand.i, cand.vi));
      else
        enc.formula.add_clause(as_lit(cand.i, cand.vi),
                               as_lit(cand.j, cand.vj));
    }
    if (remaining > 0)
      throw internal_error(
          "a same-page pair constraint did not reduce to two-literal clauses");
  };

  std::vector<std::vector<int>> by_page(inst.ell());
  for (int i = 0; i < g.edge_count(); ++i) by_page[sigma[i]].push_back(i);
  for (const auto& bucket : by_page) {
    for (std::size_t x = 0; x < bucket.size() && feasible; ++x) {
      for (std::size_t y = x + 1; y < bucket.size() && feasible; ++y) {
        Edge e1 = g.edges()[bucket[x]], e2 = g.edges()[bucket[y]];
        if (e1.shares_endpoint(e2)) continue;
        encode_pair(e1, e2);
      }
    }
  }

  if (!feasible) return std::nullopt;
  return enc;
}

SpineOrder decode_spine(const Instance& inst, const EndpointOrder& eo,
                        const Encoding& enc,
                        const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != enc.formula.variable_count)
    throw precondition_error("assignment size does not match the formula");

  std::vector<int> eo_rank(inst.g().vertex_count(), -1);
  for (std::size_t i = 0; i < eo.order.size(); ++i)
    eo_rank[eo.order[i]] = static_cast<int>(i);

  const auto& h_order = inst.h_vertices();
  std::vector<int> h_rank(inst.g().vertex_count(), -1);
  for (std::size_t i = 0; i < h_order.size(); ++i)
    h_rank[h_order[i]] = static_cast<int>(i);

  auto precedes_old = [&](int u, int w) -> bool {
    if (eo_rank[w] != -1) return eo_rank[u] < eo_rank[w];
    return assignment[enc.vars.var_of.at({u, w})];
  };

  std::vector<int> gap_of_vertex(inst.g().vertex_count(), -1);
  for (int u : inst.new_vertices()) {
    int gap = static_cast<int>(h_order.size());
    bool seen_true = false;
    for (std::size_t i = 0; i < h_order.size(); ++i) {
      bool before = precedes_old(u, h_order[i]);
      if (before && !seen_true) {
        seen_true = true;
        gap = static_cast<int>(i);
      } else if (!before && seen_true) {
        throw internal_error("order variables do not form an up-set");
      }
    }
    gap_of_vertex[u] = gap;
  }

  // New vertices sharing a gap keep their endpoint-order ranks; a larger
  // gap for an eo-earlier vertex would contradict the consistency clauses.
  std::vector<int> new_sorted = inst.new_vertices();
  std::sort(new_sorted.begin(), new_sorted.end(), [&](int a, int b) {
    if (gap_of_vertex[a] != gap_of_vertex[b])
      return gap_of_vertex[a] < gap_of_vertex[b];
    return eo_rank[a] < eo_rank[b];
  });
  for (int u : inst.new_vertices())
    for (int v : inst.new_vertices())
      if (eo_rank[u] < eo_rank[v] && gap_of_vertex[u] > gap_of_vertex[v])
        throw internal_error("decoded gaps contradict the endpoint order");

  std::vector<int> order;
  order.reserve(inst.g().vertex_count());
  std::size_t cursor = 0;
  for (std::size_t gap = 0; gap <= h_order.size(); ++gap) {
    while (cursor < new_sorted.size() &&
           gap_of_vertex[new_sorted[cursor]] == static_cast<int>(gap)) {
      order.push_back(new_sorted[cursor]);
      ++cursor;
    }
    if (gap < h_order.size()) order.push_back(h_order[gap]);
  }
  return SpineOrder(inst.g().vertex_count(), order);
}

std::optional<std::pair<QueueLayout, BranchStats>> solve_fpt_kappa_ell(
    const Instance& inst, const SolveOptions& opts, BranchStats* stats_out) {
  int m_add = inst.m_add();
  std::uint64_t sigma_count = 1;
  for (int i = 0; i < m_add; ++i) {
    if (sigma_count > UINT64_MAX / static_cast<std::uint64_t>(inst.ell()))
      throw error("page assignment count does not fit in 64 bits");
    sigma_count *= static_cast<std::uint64_t>(inst.ell());
  }
  // The encoding keeps the order between new vertices and old edge
  // endpoints variable, so only the internal order of the new vertices is
  // enumerated: ell^m_add * n_add! branches in total.
  std::uint64_t eo_count = 1;
  for (int i = 1; i <= inst.n_add(); ++i) {
    if (eo_count > UINT64_MAX / static_cast<std::uint64_t>(i))
      throw error("endpoint order count does not fit in 64 bits");
    eo_count *= static_cast<std::uint64_t>(i);
  }
  if (eo_count != 0 && sigma_count > UINT64_MAX / eo_count)
    throw error("branch count does not fit in 64 bits");
  std::uint64_t total = sigma_count * eo_count;

  struct Hit {
    QueueLayout layout;
  };
  auto run_branch = [&](std::uint64_t index) -> BranchEval<Hit> {
    BranchEval<Hit> eval;
    eval.explored = 1;
    std::uint64_t sigma_idx = index / eo_count;
    std::uint64_t eo_idx = index % eo_count;

    std::vector<int> new_pages(m_add);
    std::uint64_t rest = sigma_idx;
    for (int i = m_add - 1; i >= 0; --i) {
      new_pages[i] = static_cast<int>(rest % inst.ell());
      rest /= static_cast<std::uint64_t>(inst.ell());
    }
    std::vector<int> sigma(inst.g().edge_count());
    for (std::size_t i = 0; i < inst.old_edges().size(); ++i)
      sigma[inst.old_edge_g_indices()[i]] = inst.old_pages()[i];
    for (int i = 0; i < m_add; ++i)
      sigma[inst.new_edge_g_indices()[i]] = new_pages[i];

    // Lexicographic unranking of the new-vertex permutation.
    EndpointOrder eo;
    {
      std::vector<int> pool = inst.new_vertices();
      std::uint64_t rest = eo_idx;
      std::vector<std::uint64_t> factorial(pool.size() + 1, 1);
      for (std::size_t i = 1; i < factorial.size(); ++i)
        factorial[i] = factorial[i - 1] * i;
      while (!pool.empty()) {
        std::uint64_t block = factorial[pool.size() - 1];
        std::size_t pick = static_cast<std::size_t>(rest / block);
        rest %= block;
        eo.order.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
      }
    }
    auto encoding = encode_instance(inst, sigma, eo);
    if (!encoding) {
      eval.pruned = 1;
      return eval;
    }
    auto assignment = solve_2sat(encoding->formula);
    if (!assignment) return eval;
    SpineOrder spine = decode_spine(inst, eo, *encoding, *assignment);
    QueueLayout layout{spine, PageAssignment(inst.ell(), sigma)};
    if (opts.check_invariants && !validate_layout(inst.g(), layout, 1).ok)
      throw internal_error("FPT driver decoded an invalid layout");
    eval.hit = Hit{std::move(layout)};
    return eval;
  };

  auto search = ordered_first_success<Hit>(total, opts.jobs, run_branch);
  BranchStats stats;
  stats.branches_explored = search.explored;
  stats.branches_pruned = search.pruned;
  if (search.hit) stats.solutions_found = 1;
  if (stats_out) *stats_out = stats;
  if (!search.hit) return std::nullopt;
  return {{search.hit->second.layout, stats}};
}

}  // namespace qlext
