#include "qlext/branch.hpp"

#include <algorithm>

#include "qlext/parallel.hpp"

namespace qlext {

std::uint64_t placement_count(int old_count, int n_add) {
  std::uint64_t total = 1;
  for (int i = 1; i <= n_add; ++i)
    total *= static_cast<std::uint64_t>(old_count + i);
  return total;
}

PlacementStream::PlacementStream(const Instance& inst) : inst_(&inst) {
  gaps_.assign(inst.n_add(), 0);
  gap_groups_.assign(inst.h_vertices().size() + 1, {});
  if (!gaps_.empty()) {
    gap_groups_[0] = inst.new_vertices();
  }
}

void PlacementStream::rebuild_sequence(Placement& out) const {
  out.gap_of = gaps_;
  out.sequence.clear();
  for (const auto& group : gap_groups_)
    out.sequence.insert(out.sequence.end(), group.begin(), group.end());
}

bool PlacementStream::advance_orders() {
  // Treat per-gap permutations as digits, last gap varying fastest.
  for (int gap = static_cast<int>(gap_groups_.size()) - 1; gap >= 0; --gap) {
    auto& group = gap_groups_[gap];
    if (group.size() < 2) continue;
    if (std::next_permutation(group.begin(), group.end())) return true;
  }
  return false;
}

bool PlacementStream::next(Placement& out) {
  if (done_) return false;
  if (fresh_) {
    fresh_ = false;
    rebuild_sequence(out);
    return true;
  }
  if (advance_orders()) {
    rebuild_sequence(out);
    return true;
  }
  // Advance the gap vector odometer (last coordinate fastest) and reset the
  // per-gap orders to sorted.
  int gap_count = static_cast<int>(inst_->h_vertices().size()) + 1;
  int pos = static_cast<int>(gaps_.size()) - 1;
  while (pos >= 0 && gaps_[pos] == gap_count - 1) {
    gaps_[pos] = 0;
    --pos;
  }
  if (pos < 0) {
    done_ = true;
    return false;
  }
  ++gaps_[pos];
  for (auto& group : gap_groups_) group.clear();
  const auto& fresh_vertices = inst_->new_vertices();
  for (std::size_t i = 0; i < gaps_.size(); ++i)
    gap_groups_[gaps_[i]].push_back(fresh_vertices[i]);
  rebuild_sequence(out);
  return true;
}

SpineOrder spine_with_placement(const Instance& inst, const Placement& p) {
  const auto& h_order = inst.h_vertices();
  std::vector<std::vector<int>> groups(h_order.size() + 1);
  std::size_t cursor = 0;
  for (std::size_t gap = 0; gap < groups.size(); ++gap) {
    for (std::size_t i = 0; i < p.gap_of.size(); ++i) {
      if (static_cast<std::size_t>(p.gap_of[i]) == gap) {
        groups[gap].push_back(p.sequence[cursor]);
        ++cursor;
      }
    }
  }
  std::vector<int> order;
  order.reserve(inst.g().vertex_count());
  for (std::size_t gap = 0; gap <= h_order.size(); ++gap) {
    for (int v : groups[gap]) order.push_back(v);
    if (gap < h_order.size()) order.push_back(h_order[gap]);
  }
  return SpineOrder(inst.g().vertex_count(), order);
}

PruneResult prune_flexible_edges(const Instance& inst, const SpineOrder& spine,
                                 bool iterative) {
  if (!spine_extends_h(inst, spine))
    throw precondition_error(
        "prune_flexible_edges needs a full spine extending the spine of H");
  auto table = admissible_pages(inst, spine);

  PruneResult result;
  std::vector<char> removed(inst.new_edges().size(), 0);
  int remaining = inst.m_add();
  int threshold = inst.m_add();
  bool changed = true;
  while (changed) {
    changed = false;
    if (iterative) threshold = remaining;
    for (std::size_t i = 0; i < inst.new_edges().size(); ++i) {
      if (removed[i]) continue;
      if (static_cast<int>(table.admissible[i].size()) >= threshold &&
          threshold > 0) {
        removed[i] = 1;
        --remaining;
        result.removed.push_back(inst.new_edges()[i]);
        result.removed_indices.push_back(static_cast<int>(i));
        if (iterative) {
          changed = true;
          break;  // re-derive the threshold before the next removal
        }
      }
    }
    if (!iterative) break;
  }
  for (std::size_t i = 0; i < inst.new_edges().size(); ++i)
    if (!removed[i]) {
      result.kept.push_back(inst.new_edges()[i]);
      result.kept_indices.push_back(static_cast<int>(i));
    }
  return result;
}

namespace detail {

EdgesOnlyResult solve_edges_only_ex(const Instance& inst,
                                    const SpineOrder& spine,
                                    const SolveOptions& opts) {
  if (!spine_extends_h(inst, spine))
    throw precondition_error(
        "solve_edges_only needs a full spine extending the spine of H");

  PruneResult pruned = prune_flexible_edges(inst, spine, opts.iterative_prune);
  auto table = compute_admissible(inst.old_edges(), inst.old_pages(),
                                  inst.ell(), pruned.kept, spine);
  for (const auto& pages : table.admissible)
    if (pages.empty())
      return {EdgesOnlyOutcome::empty_admissible, std::nullopt};

  // Exhaustive assignment of the survivors to their admissible pages, in
  // canonical edge order with pages ascending. Old-edge conflicts are ruled
  // out by P(e); only survivor pairs can clash.
  int k = static_cast<int>(pruned.kept.size());
  std::vector<int> chosen(k, -1);  // position in the admissible list
  std::vector<int> survivor_page(k, -1);
  auto conflicts_assigned = [&](int i, int page) {
    for (int j : table.conflicts[i])
      if (j < static_cast<int>(table.conflicts.size()) &&
          survivor_page[j] == page && j != i)
        return true;
    return false;
  };
  int at = 0;
  bool found = k == 0;
  while (!found) {
    if (at == k) {
      found = true;
      break;
    }
    bool advanced = false;
    int from = chosen[at] + 1;
    if (chosen[at] != -1) survivor_page[at] = -1;
    for (int c = from; c < static_cast<int>(table.admissible[at].size());
         ++c) {
      int page = table.admissible[at][c];
      if (conflicts_assigned(at, page)) continue;
      chosen[at] = c;
      survivor_page[at] = page;
      advanced = true;
      break;
    }
    if (advanced) {
      ++at;
    } else {
      chosen[at] = -1;
      if (at == 0) return {EdgesOnlyOutcome::unsolvable, std::nullopt};
      --at;
    }
  }

  // Re-insert the pruned edges in reverse removal order; the removal
  // threshold guarantees a page free of conflicting new edges.
  std::vector<int> new_pages(inst.new_edges().size(), -1);
  for (int i = 0; i < k; ++i)
    new_pages[pruned.kept_indices[i]] = survivor_page[i];
  for (auto it = pruned.removed_indices.rbegin();
       it != pruned.removed_indices.rend(); ++it) {
    Edge e = inst.new_edges()[*it];
    std::vector<char> blocked(inst.ell(), 0);
    for (std::size_t j = 0; j < inst.old_edges().size(); ++j)
      if (is_nesting(spine, e, inst.old_edges()[j]))
        blocked[inst.old_pages()[j]] = 1;
    for (std::size_t j = 0; j < inst.new_edges().size(); ++j)
      if (new_pages[j] != -1 && is_nesting(spine, e, inst.new_edges()[j]))
        blocked[new_pages[j]] = 1;
    int page = -1;
    for (int p = 0; p < inst.ell(); ++p)
      if (!blocked[p]) {
        page = p;
        break;
      }
    if (page == -1)
      throw internal_error(
          "no page available while re-inserting a pruned edge");
    new_pages[*it] = page;
  }

  QueueLayout layout = combine_layout(inst, spine, new_pages);
  if (opts.check_invariants && !validate_layout(inst.g(), layout, 1).ok)
    throw internal_error("solve_edges_only produced an invalid layout");
  return {EdgesOnlyOutcome::solved, layout};
}

}  // namespace detail

std::optional<QueueLayout> solve_edges_only(const Instance& inst,
                                            const SpineOrder& spine,
                                            const SolveOptions& opts) {
  auto result = detail::solve_edges_only_ex(inst, spine, opts);
  return result.layout;
}

std::optional<std::pair<QueueLayout, BranchStats>> solve_xp(
    const Instance& inst, const SolveOptions& opts, BranchStats* stats_out) {
  if (inst.has_parallel_edges())
    throw precondition_error("solve_xp requires a simple instance");

  int gap_count = static_cast<int>(inst.h_vertices().size()) + 1;
  int n_add = inst.n_add();
  std::uint64_t gap_vectors = 1;
  for (int i = 0; i < n_add; ++i)
    gap_vectors *= static_cast<std::uint64_t>(gap_count);

  struct Hit {
    QueueLayout layout;
  };
  // One branch per gap vector; internal orders are scanned inside so the
  // explored/pruned unit counters still count placements.
  auto run_gap_vector = [&](std::uint64_t index) -> BranchEval<Hit> {
    BranchEval<Hit> eval;
    std::vector<int> gaps(n_add);
    std::uint64_t rest = index;
    for (int i = n_add - 1; i >= 0; --i) {
      gaps[i] = static_cast<int>(rest % gap_count);
      rest /= gap_count;
    }
    std::vector<std::vector<int>> groups(gap_count);
    for (int i = 0; i < n_add; ++i)
      groups[gaps[i]].push_back(inst.new_vertices()[i]);
    // Iterate per-gap permutations, last gap fastest.
    while (true) {
      Placement placement;
      placement.gap_of = gaps;
      for (const auto& group : groups)
        placement.sequence.insert(placement.sequence.end(), group.begin(),
                                  group.end());
      SpineOrder spine = spine_with_placement(inst, placement);
      auto branch = detail::solve_edges_only_ex(inst, spine, opts);
      ++eval.explored;
      if (branch.outcome == detail::EdgesOnlyOutcome::empty_admissible)
        ++eval.pruned;
      if (branch.outcome == detail::EdgesOnlyOutcome::solved) {
        eval.hit = Hit{*branch.layout};
        return eval;
      }
      bool more = false;
      for (int gap = gap_count - 1; gap >= 0; --gap) {
        if (groups[gap].size() < 2) continue;
        if (std::next_permutation(groups[gap].begin(), groups[gap].end())) {
          more = true;
          break;
        }
      }
      if (!more) break;
    }
    return eval;
  };

  auto search = ordered_first_success<Hit>(gap_vectors, opts.jobs,
                                           run_gap_vector);
  BranchStats stats;
  stats.branches_explored = search.explored;
  stats.branches_pruned = search.pruned;
  if (search.hit) stats.solutions_found = 1;
  if (stats_out) *stats_out = stats;
  if (!search.hit) return std::nullopt;
  return {{search.hit->second.layout, stats}};
}

}  // namespace qlext
