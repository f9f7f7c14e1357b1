#include "qlext/bench.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace qlext {

BenchOutcome run_bench(
    const std::vector<std::pair<std::string, Instance>>& instances,
    const std::vector<BenchAlgo>& algos, unsigned jobs) {
  BenchOutcome outcome;
  std::size_t tasks = instances.size() * algos.size();
  outcome.rows.resize(tasks);

  auto run_task = [&](std::size_t task) {
    std::size_t inst_at = task / algos.size();
    std::size_t algo_at = task % algos.size();
    const auto& [id, inst] = instances[inst_at];
    const BenchAlgo& algo = algos[algo_at];
    BenchRow row{id, algo.name, "", 0, 0.0};
    auto start = std::chrono::steady_clock::now();
    BenchAlgoResult result = algo.run(inst);
    auto stop = std::chrono::steady_clock::now();
    row.result = result.result;
    row.branches = result.branches;
    row.milliseconds =
        std::chrono::duration<double, std::milli>(stop - start).count();
    outcome.rows[task] = std::move(row);
  };

  if (jobs <= 1 || tasks <= 1) {
    for (std::size_t task = 0; task < tasks; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        std::size_t task = next.fetch_add(1);
        if (task >= tasks) return;
        run_task(task);
      }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Definitive answers must agree per instance.
  for (std::size_t inst_at = 0; inst_at < instances.size(); ++inst_at) {
    std::string seen;
    std::string seen_algo;
    for (std::size_t algo_at = 0; algo_at < algos.size(); ++algo_at) {
      const BenchRow& row = outcome.rows[inst_at * algos.size() + algo_at];
      if (row.result != "solved" && row.result != "unsolvable") continue;
      if (seen.empty()) {
        seen = row.result;
        seen_algo = row.algo;
      } else if (seen != row.result) {
        outcome.disagreement = true;
        if (outcome.detail.empty())
          outcome.detail = "instance " + row.instance_id + ": " + seen_algo +
                           " says " + seen + ", " + row.algo + " says " +
                           row.result;
      }
    }
  }
  return outcome;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "instance,algo,result,branches,milliseconds\n";
  for (const BenchRow& row : rows) {
    out << row.instance_id << ',' << row.algo << ',' << row.result << ','
        << row.branches << ',' << row.milliseconds << '\n';
  }
  return out.str();
}

}  // namespace qlext
