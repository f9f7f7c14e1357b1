#include "qlext/gen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "qlext/fixed_order.hpp"

namespace qlext {

void validate_mcc(const MccInstance& mcc) {
  int n = mcc.graph.vertex_count();
  if (mcc.k < 1) throw validation_error("color count must be at least 1");
  if (static_cast<int>(mcc.color_of.size()) != n)
    throw validation_error("coloring must cover every vertex");
  std::vector<int> class_size(mcc.k, 0);
  for (int c : mcc.color_of) {
    if (c < 1 || c > mcc.k)
      throw validation_error("color out of range 1..k");
    ++class_size[c - 1];
  }
  for (int s : class_size)
    if (s == 0) throw validation_error("every color class must be non-empty");
  for (const Edge& e : mcc.graph.edges())
    if (mcc.color_of[e.u] == mcc.color_of[e.v])
      throw validation_error("color classes must be independent sets");
}

bool has_colorful_clique(const MccInstance& mcc) {
  validate_mcc(mcc);
  std::vector<std::vector<int>> by_color(mcc.k);
  for (int v = 0; v < mcc.graph.vertex_count(); ++v)
    by_color[mcc.color_of[v] - 1].push_back(v);
  std::vector<int> picked;
  auto adjacent = [&](int a, int b) { return mcc.graph.has_edge(a, b); };
  std::function<bool(int)> go = [&](int color) -> bool {
    if (color == mcc.k) return true;
    for (int v : by_color[color]) {
      bool fits = true;
      for (int w : picked)
        if (!adjacent(v, w)) {
          fits = false;
          break;
        }
      if (!fits) continue;
      picked.push_back(v);
      if (go(color + 1)) return true;
      picked.pop_back();
    }
    return false;
  };
  return go(0);
}

namespace {

struct ReductionNaming {
  // copy tokens per color: copies[alpha-1][i-1], i = 1..n_alpha+1
  std::vector<std::vector<std::string>> copies;
  std::vector<std::string> bot;  // per alpha in 1..k+1
  // separators per alpha in 1..k+1 and gadget page t in 0..M-1 (multi form
  // repeats one token)
  std::vector<std::vector<std::string>> bot_left, bot_right;
};

std::string color_tag(int alpha) { return std::to_string(alpha); }

ReductionNaming make_names(int k, int M, const std::vector<int>& class_size,
                           bool simple) {
  ReductionNaming names;
  names.copies.resize(k);
  for (int a = 1; a <= k; ++a) {
    for (int i = 1; i <= class_size[a - 1] + 1; ++i)
      names.copies[a - 1].push_back("u" + color_tag(a) + "_" +
                                    std::to_string(i));
  }
  names.bot.resize(k + 1);
  names.bot_left.assign(k + 1, {});
  names.bot_right.assign(k + 1, {});
  for (int a = 1; a <= k + 1; ++a) {
    names.bot[a - 1] = "u" + color_tag(a) + "_bot";
    for (int t = 0; t < std::max(M, 1); ++t) {
      if (simple) {
        names.bot_left[a - 1].push_back("u" + color_tag(a) + "_botL_e" +
                                        std::to_string(t + 1));
        names.bot_right[a - 1].push_back("u" + color_tag(a) + "_botR_e" +
                                         std::to_string(t + 1));
      } else {
        names.bot_left[a - 1].push_back("u" + color_tag(a) + "_botL");
        names.bot_right[a - 1].push_back("u" + color_tag(a) + "_botR");
      }
    }
  }
  return names;
}

}  // namespace

ReductionArtifacts reduce_mcc(const MccInstance& mcc, bool simple) {
  validate_mcc(mcc);
  const Graph& gc = mcc.graph;
  int k = mcc.k;
  int M = gc.edge_count();

  // Vertices per color, ordered by clique-graph index; v_alpha^i is the i-th.
  std::vector<std::vector<int>> by_color(k);
  std::vector<int> index_in_color(gc.vertex_count());
  for (int v = 0; v < gc.vertex_count(); ++v) {
    index_in_color[v] = static_cast<int>(by_color[mcc.color_of[v] - 1].size());
    by_color[mcc.color_of[v] - 1].push_back(v);
  }
  std::vector<int> class_size(k);
  for (int a = 0; a < k; ++a) class_size[a] = static_cast<int>(by_color[a].size());

  // Gadget pages follow the lexicographic order of the edge endpoint tokens.
  std::vector<int> edge_order(M);
  for (int i = 0; i < M; ++i) edge_order[i] = i;
  auto edge_key = [&](int i) {
    const Edge& e = gc.edges()[i];
    std::string a = gc.name_of(e.u), b = gc.name_of(e.v);
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  std::sort(edge_order.begin(), edge_order.end(),
            [&](int i, int j) { return edge_key(i) < edge_key(j); });
  std::vector<int> page_of_edge(M);
  for (int t = 0; t < M; ++t) page_of_edge[edge_order[t]] = t;
  int ell = M + 1;
  int dummy_page = M;

  ReductionNaming names = make_names(k, M, class_size, simple);
  bool multi = !simple;

  // Gadget geometry per page: colors, copy indices of the twist corners.
  struct GadgetShape {
    int alpha, beta;  // alpha < beta
    int i, j;         // 1-based copy indices of the twist corners
  };
  std::vector<GadgetShape> shape(M);
  for (int t = 0; t < M; ++t) {
    const Edge& e = gc.edges()[edge_order[t]];
    int col_u = mcc.color_of[e.u], col_v = mcc.color_of[e.v];
    int va = col_u < col_v ? e.u : e.v;
    int vb = col_u < col_v ? e.v : e.u;
    shape[t] = {std::min(col_u, col_v), std::max(col_u, col_v),
                index_in_color[va] + 1, index_in_color[vb] + 1};
  }

  // The upper twist edge of one gadget can coincide with the lower twist
  // edge of the gadget for the diagonal neighbor edge; the per-page
  // separator copies do not help there. In the simple form such an upper
  // twist gets a private twin endpoint placed right before the copy vertex
  // it would have used, which only strengthens the blocking on that page.
  std::vector<std::string> twin_of_page(M);
  std::map<std::pair<int, int>, std::vector<int>> twins_at;  // (alpha, i)
  if (simple) {
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> lower;
    for (int t = 0; t < M; ++t)
      lower.insert({{shape[t].alpha, shape[t].i}, {shape[t].beta, shape[t].j}});
    for (int t = 0; t < M; ++t) {
      std::pair<std::pair<int, int>, std::pair<int, int>> upper = {
          {shape[t].alpha, shape[t].i + 1}, {shape[t].beta, shape[t].j + 1}};
      if (lower.count(upper)) {
        twin_of_page[t] = "u" + color_tag(shape[t].alpha) + "_" +
                          std::to_string(shape[t].i + 1) + "_tw" +
                          std::to_string(t + 1);
        twins_at[{shape[t].alpha, shape[t].i + 1}].push_back(t);
      }
    }
  }

  // Spine order of H.
  Graph h(multi);
  std::vector<std::string> spine_tokens;
  for (int a = 1; a <= k + 1; ++a) {
    if (simple) {
      for (int t = 0; t < M; ++t)
        spine_tokens.push_back(names.bot_left[a - 1][t]);
    } else {
      spine_tokens.push_back(names.bot_left[a - 1][0]);
    }
    spine_tokens.push_back(names.bot[a - 1]);
    if (simple) {
      for (int t = 0; t < M; ++t)
        spine_tokens.push_back(names.bot_right[a - 1][t]);
    } else {
      spine_tokens.push_back(names.bot_right[a - 1][0]);
    }
    if (a <= k) {
      for (int i = 1; i <= class_size[a - 1] + 1; ++i) {
        auto at = twins_at.find({a, i});
        if (at != twins_at.end())
          for (int t : at->second) spine_tokens.push_back(twin_of_page[t]);
        spine_tokens.push_back(names.copies[a - 1][i - 1]);
      }
    }
  }
  for (const auto& token : spine_tokens) h.add_vertex(token);

  // Gadget edges, all in H. Page t hosts the gadget of the t-th edge.
  std::vector<int> h_pages;
  auto add_h_edge = [&](const std::string& a, const std::string& b, int page) {
    h.add_edge(a, b);
    h_pages.push_back(page);
  };
  auto copy_name = [&](int alpha, int i) {  // i is 1-based, alpha in 1..k
    return names.copies[alpha - 1][i - 1];
  };

  for (int t = 0; t < M; ++t) {
    auto [alpha, beta, i, j] = shape[t];
    const auto& bl = names.bot_left;
    const auto& br = names.bot_right;
    int nb = class_size[beta - 1];
    std::string upper_left =
        twin_of_page[t].empty() ? copy_name(alpha, i + 1) : twin_of_page[t];

    add_h_edge(bl[0][t], copy_name(alpha, 1), t);
    add_h_edge(br[alpha - 1][t], copy_name(alpha, 1), t);
    add_h_edge(copy_name(beta, nb + 1), bl[beta][t], t);
    add_h_edge(copy_name(beta, nb + 1), br[k][t], t);
    // the twist synchronizing the two placements
    add_h_edge(copy_name(alpha, i), copy_name(beta, j), t);
    add_h_edge(upper_left, copy_name(beta, j + 1), t);
    // whiskers restricting visibility inside the color blocks
    add_h_edge(br[alpha - 1][t], copy_name(alpha, i + 1), t);
    add_h_edge(copy_name(alpha, i), bl[alpha][t], t);
    add_h_edge(br[beta - 1][t], copy_name(beta, j + 1), t);
    add_h_edge(copy_name(beta, j), bl[beta][t], t);
  }

  // Fixation gadget: the dummy page chain plus two guards per gadget page.
  for (int a = 1; a <= k; ++a) {
    add_h_edge(names.bot[a - 1], copy_name(a, 1), dummy_page);
    add_h_edge(copy_name(a, 1), copy_name(a, class_size[a - 1] + 1),
               dummy_page);
    add_h_edge(copy_name(a, class_size[a - 1] + 1), names.bot[a], dummy_page);
  }
  for (int t = 0; t < M; ++t) {
    add_h_edge(names.bot_left[0][t], names.bot[0], t);
    add_h_edge(names.bot[k], names.bot_right[k][t], t);
  }

  // G adds the new vertices: a k-clique plus the fixation edges.
  Graph g(multi);
  for (const auto& token : spine_tokens) g.add_vertex(token);
  std::vector<std::string> x_tokens;
  for (int a = 1; a <= k; ++a) {
    x_tokens.push_back("x" + std::to_string(a));
    g.add_vertex(x_tokens.back());
  }
  for (int i = 0; i < h.edge_count(); ++i)
    g.add_edge(h.edges()[i].u, h.edges()[i].v);
  for (int a = 1; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b)
      g.add_edge(x_tokens[a - 1], x_tokens[b - 1]);
  for (int a = 1; a <= k; ++a) {
    g.add_edge(x_tokens[a - 1], names.bot[a - 1]);
    g.add_edge(x_tokens[a - 1], names.bot[a]);
  }

  std::vector<int> h_spine(h.vertex_count());
  for (int i = 0; i < h.vertex_count(); ++i) h_spine[i] = i;
  QueueLayout layout_h{SpineOrder(h.vertex_count(), h_spine),
                       PageAssignment(ell, h_pages)};

  ReductionArtifacts art{
      Instance(ell, std::move(g), std::move(h), std::move(layout_h)),
      multi,
      dummy_page,
      {},
      std::move(page_of_edge),
      std::move(x_tokens),
      names.bot,
      names.bot_left,
      names.bot_right,
      names.copies,
      {},
      {}};
  art.interval_of.resize(gc.vertex_count());
  art.vertex_slot.resize(gc.vertex_count());
  for (int v = 0; v < gc.vertex_count(); ++v) {
    int alpha = mcc.color_of[v];
    int i = index_in_color[v] + 1;
    art.interval_of[v] = {copy_name(alpha, i), copy_name(alpha, i + 1)};
    art.vertex_slot[v] = {alpha, i};
  }
  for (const Edge& e : gc.edges()) art.gc_edges.emplace_back(e.u, e.v);
  return art;
}

ReductionCheckReport verify_reduction_properties(const ReductionArtifacts& art,
                                                 const QueueLayout& solution) {
  ReductionCheckReport report;
  const Instance& inst = art.instance;
  const Graph& g = inst.g();
  int k = static_cast<int>(art.new_vertices.size());
  int M = static_cast<int>(art.page_of_edge.size());

  auto rank_of = [&](const std::string& token) {
    auto idx = g.index_of(token);
    if (!idx) throw internal_error("artifact token missing from G");
    return solution.spine.rank(*idx);
  };
  auto complain = [&](std::string what) {
    report.violations.push_back(std::move(what));
  };

  // Each x_alpha strictly inside its color block, and the concrete interval.
  std::vector<int> selected_copy(k, -1);  // 1-based copy index i
  for (int a = 1; a <= k; ++a) {
    const auto& copies = art.copy_token[a - 1];
    int x_rank = rank_of(art.new_vertices[a - 1]);
    if (!(rank_of(copies.front()) < x_rank &&
          x_rank < rank_of(copies.back()))) {
      complain("x" + std::to_string(a) + " lies outside its color block");
      continue;
    }
    for (std::size_t i = 0; i + 1 < copies.size(); ++i)
      if (rank_of(copies[i]) < x_rank && x_rank < rank_of(copies[i + 1]))
        selected_copy[a - 1] = static_cast<int>(i) + 1;
    if (selected_copy[a - 1] == -1)
      complain("x" + std::to_string(a) + " does not sit in a copy interval");
  }

  // Fixation edges exactly on the dummy page; nothing else new there.
  auto page_of_new_edge = [&](const std::string& a, const std::string& b) {
    auto idx = g.edge_index(Edge(*g.index_of(a), *g.index_of(b)));
    if (!idx) throw internal_error("expected new edge missing from G");
    return solution.assignment.page(*idx);
  };
  for (int a = 1; a <= k; ++a) {
    if (page_of_new_edge(art.new_vertices[a - 1], art.bot[a - 1]) !=
        art.dummy_page)
      complain("fixation edge of x" + std::to_string(a) +
               " left the dummy page");
    if (page_of_new_edge(art.new_vertices[a - 1], art.bot[a]) !=
        art.dummy_page)
      complain("fixation edge of x" + std::to_string(a) +
               " left the dummy page");
  }
  for (std::size_t i = 0; i < inst.new_edges().size(); ++i) {
    Edge e = inst.new_edges()[i];
    int page = solution.assignment.page(inst.new_edge_g_indices()[i]);
    if (page != art.dummy_page) continue;
    bool touches_bot = false;
    for (const auto& token : art.bot)
      if (e.touches(*g.index_of(token))) touches_bot = true;
    if (!touches_bot)
      complain("a non-fixation new edge sits on the dummy page");
  }

  // Clique edges: their page's clique-graph edge must join exactly the
  // intervals the endpoints were placed in.
  for (int a = 1; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) {
      int page =
          page_of_new_edge(art.new_vertices[a - 1], art.new_vertices[b - 1]);
      if (page == art.dummy_page) continue;  // already reported above
      int gc_edge = -1;
      for (int e = 0; e < M; ++e)
        if (art.page_of_edge[e] == page) gc_edge = e;
      if (gc_edge == -1) {
        complain("clique edge x" + std::to_string(a) + "x" +
                 std::to_string(b) + " sits on a page without a gadget");
        continue;
      }
      auto [v, w] = art.gc_edges[gc_edge];
      auto slot_v = art.vertex_slot[v], slot_w = art.vertex_slot[w];
      if (slot_v.first > slot_w.first) std::swap(slot_v, slot_w);
      if (slot_v.first != a || slot_w.first != b) {
        complain("clique edge x" + std::to_string(a) + "x" +
                 std::to_string(b) + " uses a gadget of other colors");
        continue;
      }
      if (selected_copy[a - 1] != slot_v.second ||
          selected_copy[b - 1] != slot_w.second)
        complain("clique edge x" + std::to_string(a) + "x" +
                 std::to_string(b) +
                 " does not match the placed intervals of its gadget");
    }
  }

  // Separator visibility: no spine gap outside a color block may see the
  // block's bot vertex on a gadget page. Probed from gap positions (where a
  // new vertex could sit), encoded as doubled ranks over the old spine.
  std::vector<int> h_rank(g.vertex_count(), -1);
  for (std::size_t i = 0; i < inst.h_vertices().size(); ++i)
    h_rank[inst.h_vertices()[i]] = static_cast<int>(i);
  auto gap_sees = [&](int gap_after, int target, int page) {
    int pos = 2 * gap_after + 1;
    int t_pos = 2 * h_rank[target];
    int lo = std::min(pos, t_pos), hi = std::max(pos, t_pos);
    for (std::size_t j = 0; j < inst.old_edges().size(); ++j) {
      if (inst.old_pages()[j] != page) continue;
      Edge e = inst.old_edges()[j];
      if (e.touches(target)) continue;
      int s = 2 * std::min(h_rank[e.u], h_rank[e.v]);
      int t2 = 2 * std::max(h_rank[e.u], h_rank[e.v]);
      if ((lo < s && t2 < hi) || (s < lo && hi < t2)) return false;
    }
    return true;
  };
  auto sample_gaps = [&](int lo_rank, int hi_rank) {
    // gaps strictly inside the open vertex interval (lo_rank, hi_rank)
    std::vector<int> picks;
    int span = hi_rank - lo_rank;
    if (span <= 0) return picks;
    int step = std::max(1, span / 8);
    for (int r = lo_rank; r < hi_rank; r += step) picks.push_back(r);
    return picks;
  };
  auto h_rank_of = [&](const std::string& token) {
    return h_rank[*g.index_of(token)];
  };
  for (int a = 1; a <= k; ++a) {
    int bot_idx = *g.index_of(art.bot[a - 1]);
    for (int t = 0; t < M; ++t) {
      int left_lo = h_rank_of(art.bot_left[0][t]);
      int left_hi = h_rank_of(art.bot_left[a - 1][t]);
      int right_lo = h_rank_of(art.copy_token[a - 1].back());
      int right_hi = h_rank_of(art.bot_right[k][t]);
      for (int r : sample_gaps(left_lo, left_hi))
        if (gap_sees(r, bot_idx, t))
          complain("separator leak: bot of color " + std::to_string(a) +
                   " visible from the left on page " + std::to_string(t + 1));
      for (int r : sample_gaps(right_lo, right_hi))
        if (gap_sees(r, bot_idx, t))
          complain("separator leak: bot of color " + std::to_string(a) +
                   " visible from the right on page " + std::to_string(t + 1));
    }
  }

  return report;
}

GeneratedInstance gen_random(const RandomGenConfig& cfg) {
  if (cfg.vertex_count < 1 || cfg.page_count < 1)
    throw validation_error("generator needs at least one vertex and page");
  if (cfg.edge_probability < 0.0 || cfg.edge_probability > 1.0)
    throw validation_error("edge probability must lie in [0,1]");
  if (cfg.delete_vertices < 0 || cfg.delete_edges < 0 ||
      cfg.delete_vertices >= cfg.vertex_count)
    throw validation_error("deletion policy out of range");

  std::mt19937 rng(cfg.seed);
  auto rand_below = [&](int n) {
    return static_cast<int>(rng() % static_cast<unsigned>(n));
  };
  int threshold = static_cast<int>(cfg.edge_probability * 1000000.0);

  Graph g;
  QueueLayout layout_g;
  bool realized = false;
  for (int attempt = 0; attempt < 200 && !realized; ++attempt) {
    Graph candidate;
    for (int i = 0; i < cfg.vertex_count; ++i)
      candidate.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < cfg.vertex_count; ++i)
      for (int j = i + 1; j < cfg.vertex_count; ++j)
        if (rand_below(1000000) < threshold) candidate.add_edge(i, j);
    std::vector<int> order(cfg.vertex_count);
    for (int i = 0; i < cfg.vertex_count; ++i) order[i] = i;
    for (int i = cfg.vertex_count - 1; i > 0; --i)
      std::swap(order[i], order[rand_below(i + 1)]);
    SpineOrder spine(cfg.vertex_count, order);
    auto [min_pages, witness] = fixed_order_min_pages(candidate, spine);
    if (min_pages > cfg.page_count) continue;
    g = std::move(candidate);
    layout_g = QueueLayout{
        spine, PageAssignment(cfg.page_count, witness.assignment.pages())};
    realized = true;
  }
  if (!realized)
    throw generation_error(
        "could not realize the requested page count; raise it or lower the "
        "edge probability");

  std::vector<bool> drop_vertex(cfg.vertex_count, false);
  {
    std::vector<int> ids(cfg.vertex_count);
    for (int i = 0; i < cfg.vertex_count; ++i) ids[i] = i;
    for (int i = cfg.vertex_count - 1; i > 0; --i)
      std::swap(ids[i], ids[rand_below(i + 1)]);
    for (int t = 0; t < cfg.delete_vertices; ++t) drop_vertex[ids[t]] = true;
  }
  std::vector<bool> drop_edge(g.edge_count(), false);
  {
    std::vector<int> candidates;
    for (int i = 0; i < g.edge_count(); ++i)
      if (!drop_vertex[g.edges()[i].u] && !drop_vertex[g.edges()[i].v])
        candidates.push_back(i);
    for (int i = static_cast<int>(candidates.size()) - 1; i > 0; --i)
      std::swap(candidates[i], candidates[rand_below(i + 1)]);
    int take = std::min<int>(cfg.delete_edges,
                             static_cast<int>(candidates.size()));
    for (int t = 0; t < take; ++t) drop_edge[candidates[t]] = true;
  }

  Graph h;
  for (int v = 0; v < cfg.vertex_count; ++v)
    if (!drop_vertex[v]) h.add_vertex(g.name_of(v));
  std::vector<int> h_pages;
  int max_h_page = -1;
  for (int i = 0; i < g.edge_count(); ++i) {
    Edge e = g.edges()[i];
    if (drop_vertex[e.u] || drop_vertex[e.v] || drop_edge[i]) continue;
    h.add_edge(g.name_of(e.u), g.name_of(e.v));
    h_pages.push_back(layout_g.assignment.page(i));
    max_h_page = std::max(max_h_page, h_pages.back());
  }
  int ell = cfg.page_count;
  if (cfg.shrink_pages) ell = std::max(1, max_h_page + 1);

  bool known_solvable = true;
  for (int i = 0; i < g.edge_count(); ++i)
    if (layout_g.assignment.page(i) >= ell) known_solvable = false;

  std::vector<int> h_order;
  for (int v : layout_g.spine.order())
    if (!drop_vertex[v]) h_order.push_back(*h.index_of(g.name_of(v)));
  QueueLayout layout_h{SpineOrder(h.vertex_count(), h_order),
                       PageAssignment(ell, h_pages)};
  return GeneratedInstance{
      Instance(ell, std::move(g), std::move(h), std::move(layout_h)),
      known_solvable};
}

}  // namespace qlext
