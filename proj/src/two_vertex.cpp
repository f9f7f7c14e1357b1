#include "qlext/two_vertex.hpp"

#include <algorithm>

#include "qlext/parallel.hpp"

namespace qlext {

namespace {

bool page_admissible(const std::vector<int>& pages, int p) {
  return std::find(pages.begin(), pages.end(), p) != pages.end();
}

}  // namespace

SimpleCaseResult simple_case_filter(const AdmissiblePageTable& table) {
  SimpleCaseResult result;
  for (const auto& pages : table.admissible)
    if (pages.empty()) {
      result.infeasible = true;
      return result;
    }
  for (std::size_t i = 0; i < table.admissible.size(); ++i) {
    int fallback = -1;
    for (int p : table.admissible[i]) {
      bool shared = false;
      for (int j : table.conflicts[i])
        if (page_admissible(table.admissible[j], p)) {
          shared = true;
          break;
        }
      if (!shared) {
        fallback = p;
        break;
      }
    }
    if (fallback != -1) {
      result.removed.push_back(static_cast<int>(i));
      result.fallback_page.push_back(fallback);
    }
  }
  return result;
}

RemoveSafeResult reduce_remove_safe(const TwoVertexContext& ctx,
                                    const std::vector<char>& present) {
  RemoveSafeResult result;
  std::vector<char> alive = present;
  int rank_u = ctx.spine.rank(ctx.u);
  int rank_v = ctx.spine.rank(ctx.v);
  // Right rule: vx with u before x and two or more admissible pages.
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i) {
    if (!alive[i]) continue;
    Edge e = ctx.new_edges[i];
    if (!e.touches(ctx.v) || e.touches(ctx.u)) continue;
    int x = e.other(ctx.v);
    if (ctx.spine.rank(x) > rank_u && ctx.table.admissible[i].size() >= 2) {
      alive[i] = 0;
      result.removed.push_back(static_cast<int>(i));
    }
  }
  // Left rule: uy with y before v and two or more admissible pages.
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i) {
    if (!alive[i]) continue;
    Edge e = ctx.new_edges[i];
    if (!e.touches(ctx.u) || e.touches(ctx.v)) continue;
    int y = e.other(ctx.u);
    if (ctx.spine.rank(y) < rank_v && ctx.table.admissible[i].size() >= 2) {
      alive[i] = 0;
      result.removed.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i)
    if (present[i] && alive[i]) result.surviving.push_back(static_cast<int>(i));
  return result;
}

std::optional<std::vector<int>> assign_residual(
    const TwoVertexContext& ctx, const std::vector<char>& present,
    const AdmissiblePageTable& table) {
  std::vector<int> pages(ctx.new_edges.size(), -1);
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i)
    if (present[i] && table.admissible[i].size() == 1)
      pages[i] = table.admissible[i][0];
  // Two conflicting forced edges on one page kill the branch.
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i) {
    if (pages[i] == -1) continue;
    for (int j : table.conflicts[i])
      if (pages[j] == pages[i]) return std::nullopt;
  }
  for (std::size_t i = 0; i < ctx.new_edges.size(); ++i) {
    if (!present[i] || pages[i] != -1) continue;
    int chosen = -1;
    for (int p : table.admissible[i]) {
      bool blocked = false;
      for (int j : table.conflicts[i])
        if (table.admissible[j].size() == 1 && pages[j] == p) {
          blocked = true;
          break;
        }
      if (!blocked) {
        chosen = p;
        break;
      }
    }
    if (chosen == -1) return std::nullopt;
    pages[i] = chosen;
  }
  return pages;
}

void reinsert_removed(const TwoVertexContext& ctx,
                      const std::vector<int>& removal_log,
                      std::vector<int>& pages) {
  for (auto it = removal_log.rbegin(); it != removal_log.rend(); ++it) {
    int i = *it;
    Edge e = ctx.new_edges[i];
    const auto& admissible = ctx.table.admissible[i];

    auto free_page = [&]() -> int {
      for (int p : admissible) {
        bool taken = false;
        for (int j : ctx.table.conflicts[i])
          if (pages[j] == p) {
            taken = true;
            break;
          }
        if (!taken) return p;
      }
      return -1;
    };

    int direct = free_page();
    if (direct != -1) {
      pages[i] = direct;
      continue;
    }

    // Every admissible page is held by a conflicting chain; repaint it. The
    // chain edges all attach to the other new vertex and are sorted by their
    // old endpoint; pages propagate toward the end whose admissible sets the
    // propagation invariant covers.
    std::vector<int> chain;
    for (int j : ctx.table.conflicts[i])
      if (pages[j] != -1 && page_admissible(admissible, pages[j]))
        chain.push_back(j);
    bool right_rule = e.touches(ctx.v);
    int anchor = right_rule ? ctx.u : ctx.v;
    std::sort(chain.begin(), chain.end(), [&](int a, int b) {
      return ctx.spine.rank(ctx.new_edges[a].other(anchor)) <
             ctx.spine.rank(ctx.new_edges[b].other(anchor));
    });
    if (chain.size() < 2)
      throw internal_error("re-insertion chain shorter than the page set");
    if (right_rule) {
      for (int k = static_cast<int>(chain.size()) - 2; k >= 0; --k) {
        int target = pages[chain[k + 1]];
        if (pages[chain[k]] == target) continue;
        if (!page_admissible(ctx.table.admissible[chain[k]], target))
          throw internal_error("page propagation left the admissible set");
        pages[chain[k]] = target;
      }
    } else {
      for (int k = 1; k < static_cast<int>(chain.size()); ++k) {
        int target = pages[chain[k - 1]];
        if (pages[chain[k]] == target) continue;
        if (!page_admissible(ctx.table.admissible[chain[k]], target))
          throw internal_error("page propagation left the admissible set");
        pages[chain[k]] = target;
      }
    }
    int freed = free_page();
    if (freed == -1)
      throw internal_error("chain repaint failed to free a page");
    pages[i] = freed;
  }
}

namespace {

struct BranchPipelineResult {
  std::optional<QueueLayout> layout;
  bool pruned = false;
};

// Checks the page-propagation invariant on the branch table: for edge
// triples chained around u (and symmetrically around v), a page admissible
// for the outer pair is admissible for the middle edge.
void check_propagation_invariant(const TwoVertexContext& ctx) {
  const auto& edges = ctx.new_edges;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    if (!edges[a].touches(ctx.v) || edges[a].touches(ctx.u)) continue;
    int x = edges[a].other(ctx.v);
    if (ctx.spine.rank(x) < ctx.spine.rank(ctx.u)) continue;
    for (std::size_t b = 0; b < edges.size(); ++b) {
      if (!edges[b].touches(ctx.u) || edges[b].touches(ctx.v)) continue;
      int y = edges[b].other(ctx.u);
      for (std::size_t c = 0; c < edges.size(); ++c) {
        if (c == b || !edges[c].touches(ctx.u) || edges[c].touches(ctx.v))
          continue;
        int z = edges[c].other(ctx.u);
        if (!(ctx.spine.rank(x) < ctx.spine.rank(y) &&
              ctx.spine.rank(y) < ctx.spine.rank(z) &&
              ctx.spine.rank(ctx.v) < ctx.spine.rank(y)))
          continue;
        for (int p : ctx.table.admissible[a])
          if (page_admissible(ctx.table.admissible[c], p) &&
              !page_admissible(ctx.table.admissible[b], p))
            throw internal_error("page propagation invariant failed on a branch");
      }
    }
  }
  // Left-symmetric variant: ux against pairs around v left of u.
  for (std::size_t a = 0; a < edges.size(); ++a) {
    if (!edges[a].touches(ctx.u) || edges[a].touches(ctx.v)) continue;
    int x = edges[a].other(ctx.u);
    if (ctx.spine.rank(x) > ctx.spine.rank(ctx.v)) continue;
    for (std::size_t b = 0; b < edges.size(); ++b) {
      if (!edges[b].touches(ctx.v) || edges[b].touches(ctx.u)) continue;
      int y = edges[b].other(ctx.v);
      for (std::size_t c = 0; c < edges.size(); ++c) {
        if (c == b || !edges[c].touches(ctx.v) || edges[c].touches(ctx.u))
          continue;
        int z = edges[c].other(ctx.v);
        if (!(ctx.spine.rank(z) < ctx.spine.rank(y) &&
              ctx.spine.rank(y) < ctx.spine.rank(x) &&
              ctx.spine.rank(y) < ctx.spine.rank(ctx.u)))
          continue;
        for (int p : ctx.table.admissible[a])
          if (page_admissible(ctx.table.admissible[c], p) &&
              !page_admissible(ctx.table.admissible[b], p))
            throw internal_error(
                "left page propagation invariant failed on a branch");
      }
    }
  }
}

BranchPipelineResult run_branch_pipeline(const Instance& inst,
                                         const SpineOrder& spine,
                                         std::optional<int> page_uv,
                                         const SolveOptions& opts) {
  BranchPipelineResult out;
  int a = inst.new_vertices()[0];
  int b = inst.new_vertices()[1];

  TwoVertexContext ctx;
  ctx.spine = spine;
  ctx.ell = inst.ell();
  ctx.u = spine.rank(a) < spine.rank(b) ? a : b;
  ctx.v = ctx.u == a ? b : a;
  ctx.old_edges = inst.old_edges();
  ctx.old_pages = inst.old_pages();

  Edge uv_edge(a, b);
  bool has_uv = inst.g().has_edge(a, b);
  if (has_uv != page_uv.has_value())
    throw precondition_error("uv page must be given exactly when uv exists");
  if (page_uv) {
    for (std::size_t j = 0; j < ctx.old_edges.size(); ++j)
      if (ctx.old_pages[j] == *page_uv &&
          is_nesting(spine, uv_edge, ctx.old_edges[j])) {
        out.pruned = true;
        return out;
      }
    ctx.old_edges.push_back(uv_edge);
    ctx.old_pages.push_back(*page_uv);
  }

  bool uv_skipped = false;
  for (const Edge& e : inst.new_edges()) {
    if (!uv_skipped && e == uv_edge && has_uv) {
      uv_skipped = true;
      continue;
    }
    ctx.new_edges.push_back(e);
  }
  ctx.table = compute_admissible(ctx.old_edges, ctx.old_pages, ctx.ell,
                                 ctx.new_edges, spine);
  if (opts.check_invariants) check_propagation_invariant(ctx);

  SimpleCaseResult simple = simple_case_filter(ctx.table);
  if (simple.infeasible) {
    out.pruned = true;
    return out;
  }
  std::vector<char> present(ctx.new_edges.size(), 1);
  for (int i : simple.removed) present[i] = 0;

  RemoveSafeResult reduced = reduce_remove_safe(ctx, present);
  std::vector<char> surviving(ctx.new_edges.size(), 0);
  for (int i : reduced.surviving) surviving[i] = 1;

  auto pages = assign_residual(ctx, surviving, ctx.table);
  if (!pages) return out;

  reinsert_removed(ctx, reduced.removed, *pages);

  // Simple-case removals come back on their recorded fallback pages.
  for (std::size_t k = simple.removed.size(); k-- > 0;) {
    int i = simple.removed[k];
    int p = simple.fallback_page[k];
    for (int j : ctx.table.conflicts[i])
      if ((*pages)[j] == p)
        throw internal_error("fallback page was taken by a conflicting edge");
    (*pages)[i] = p;
  }

  // Back to the canonical new-edge order, re-adding uv when present.
  std::vector<int> canonical_pages;
  canonical_pages.reserve(inst.new_edges().size());
  std::size_t branch_at = 0;
  bool uv_spent = false;
  for (const Edge& e : inst.new_edges()) {
    if (!uv_spent && has_uv && e == uv_edge) {
      canonical_pages.push_back(*page_uv);
      uv_spent = true;
    } else {
      canonical_pages.push_back((*pages)[branch_at++]);
    }
  }

  QueueLayout layout = combine_layout(inst, spine, canonical_pages);
  if (!validate_layout(inst.g(), layout, 1).ok)
    throw internal_error("2-vertex pipeline produced an invalid layout");
  out.layout = layout;
  return out;
}

SpineOrder two_vertex_spine(const Instance& inst, int u, int v, int gap_u,
                            int gap_v) {
  const auto& h_order = inst.h_vertices();
  std::vector<int> order;
  order.reserve(inst.g().vertex_count());
  for (int gap = 0; gap <= static_cast<int>(h_order.size()); ++gap) {
    if (gap == gap_u) order.push_back(u);
    if (gap == gap_v) order.push_back(v);
    if (gap < static_cast<int>(h_order.size())) order.push_back(h_order[gap]);
  }
  return SpineOrder(inst.g().vertex_count(), order);
}

}  // namespace

std::optional<QueueLayout> run_two_vertex_branch(const Instance& inst,
                                                 const SpineOrder& spine,
                                                 std::optional<int> page_uv,
                                                 const SolveOptions& opts) {
  auto result = run_branch_pipeline(inst, spine, page_uv, opts);
  return result.layout;
}

std::optional<std::pair<QueueLayout, BranchStats>> solve_two_vertices(
    const Instance& inst, const SolveOptions& opts, BranchStats* stats_out) {
  if (inst.n_add() != 2)
    throw precondition_error("the 2-vertex solver needs exactly two new vertices");
  if (!inst.new_edges_with_old_endpoints().empty())
    throw precondition_error(
        "the 2-vertex solver handles only edges incident to the new vertices");
  if (inst.has_parallel_edges())
    throw precondition_error("the 2-vertex solver requires a simple instance");

  int a = inst.new_vertices()[0];
  int b = inst.new_vertices()[1];
  bool has_uv = inst.g().has_edge(a, b);
  int page_options = has_uv ? inst.ell() : 1;
  int gap_count = static_cast<int>(inst.h_vertices().size()) + 1;

  // Branch order: (gap_u, gap_v) lexicographic with gap_u <= gap_v, the
  // identifier-smaller vertex playing u first, then the uv page ascending.
  std::vector<TwoVertexBranch> shapes;
  for (int gu = 0; gu < gap_count; ++gu)
    for (int gv = gu; gv < gap_count; ++gv)
      for (int role = 0; role < 2; ++role)
        shapes.push_back(TwoVertexBranch{gu, gv, role, std::nullopt});

  std::uint64_t total =
      static_cast<std::uint64_t>(shapes.size()) * page_options;

  struct Hit {
    QueueLayout layout;
  };
  auto run = [&](std::uint64_t index) -> BranchEval<Hit> {
    BranchEval<Hit> eval;
    eval.explored = 1;
    TwoVertexBranch branch_spec = shapes[index / page_options];
    if (has_uv)
      branch_spec.page_uv = static_cast<int>(index % page_options);
    int u = branch_spec.role == 0 ? a : b;
    int v = branch_spec.role == 0 ? b : a;
    SpineOrder spine =
        two_vertex_spine(inst, u, v, branch_spec.gap_u, branch_spec.gap_v);
    auto branch = run_branch_pipeline(inst, spine, branch_spec.page_uv, opts);
    if (branch.pruned) eval.pruned = 1;
    if (branch.layout) eval.hit = Hit{std::move(*branch.layout)};
    return eval;
  };

  auto search = ordered_first_success<Hit>(total, opts.jobs, run);
  BranchStats stats;
  stats.branches_explored = search.explored;
  stats.branches_pruned = search.pruned;
  if (search.hit) stats.solutions_found = 1;
  if (stats_out) *stats_out = stats;
  if (!search.hit) return std::nullopt;
  return {{search.hit->second.layout, stats}};
}

}  // namespace qlext
