#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace qlext {

/// Result of evaluating one branch index. `explored`/`pruned` are unit
/// counters the branch contributes (a branch may stand for several inner
/// placements); on a hit they cover only the units up to and including it.
template <typename R>
struct BranchEval {
  std::optional<R> hit;
  std::uint64_t explored = 0;
  std::uint64_t pruned = 0;
};

template <typename R>
struct OrderedSearchResult {
  std::optional<std::pair<std::uint64_t, R>> hit;  // smallest successful index
  std::uint64_t explored = 0;
  std::uint64_t pruned = 0;
};

/// Runs fn(0..count-1) and returns the hit with the smallest index, plus
/// unit counters aggregated exactly as a sequential scan up to that hit
/// would produce them. With jobs > 1 the indices are distributed over
/// workers in chunks; chunks beyond the current best hit are skipped, and
/// the final counters are reassembled from per-chunk summaries so they do
/// not depend on scheduling. fn must be safe to call concurrently.
template <typename R, typename Fn>
OrderedSearchResult<R> ordered_first_success(std::uint64_t count,
                                             unsigned jobs, Fn&& fn) {
  OrderedSearchResult<R> result;
  if (jobs <= 1 || count <= 1) {
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      BranchEval<R> eval = fn(idx);
      result.explored += eval.explored;
      result.pruned += eval.pruned;
      if (eval.hit) {
        result.hit = {idx, std::move(*eval.hit)};
        return result;
      }
    }
    return result;
  }

  constexpr std::uint64_t kChunk = 16;
  struct ChunkSummary {
    std::uint64_t explored = 0;
    std::uint64_t pruned = 0;
    std::optional<std::pair<std::uint64_t, R>> hit;
  };
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> best{UINT64_MAX};
  std::mutex mutex;
  std::map<std::uint64_t, ChunkSummary> summaries;

  auto worker = [&]() {
    while (true) {
      std::uint64_t chunk = next_chunk.fetch_add(1);
      std::uint64_t lo = chunk * kChunk;
      if (lo >= count) return;
      if (lo > best.load()) continue;  // entirely after a known hit
      std::uint64_t hi = std::min(count, lo + kChunk);
      ChunkSummary summary;
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        BranchEval<R> eval = fn(idx);
        summary.explored += eval.explored;
        summary.pruned += eval.pruned;
        if (eval.hit) {
          summary.hit = {idx, std::move(*eval.hit)};
          std::uint64_t prev = best.load();
          while (prev > idx && !best.compare_exchange_weak(prev, idx)) {
          }
          break;
        }
      }
      std::lock_guard<std::mutex> lock(mutex);
      summaries.emplace(chunk, std::move(summary));
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  // Walk chunks in order; everything before the first hit was fully
  // evaluated, so the counters reproduce the sequential scan.
  for (auto& [chunk, summary] : summaries) {
    (void)chunk;
    result.explored += summary.explored;
    result.pruned += summary.pruned;
    if (summary.hit) {
      result.hit = std::move(summary.hit);
      return result;
    }
  }
  return result;
}

}  // namespace qlext
