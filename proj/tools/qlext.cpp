#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qlext/bench.hpp"
#include "qlext/branch.hpp"
#include "qlext/core.hpp"
#include "qlext/fixed_order.hpp"
#include "qlext/gen.hpp"
#include "qlext/io.hpp"
#include "qlext/oracle.hpp"
#include "qlext/two_vertex.hpp"
#include "qlext/twosat.hpp"

namespace {

using namespace qlext;

constexpr int kExitSolved = 0;
constexpr int kExitUnsolvable = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDisagreement = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

unsigned default_jobs() {
  if (const char* env = std::getenv("QLEXT_JOBS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 1;
}

struct SolveOutcome {
  std::string status;  // solved | unsolvable | budget-exhausted | inapplicable
  std::optional<QueueLayout> layout;
  BranchStats stats;
};

double branch_estimate(const Instance& inst) {
  double est = std::pow(static_cast<double>(inst.ell()), inst.m_add());
  for (int i = 1; i <= inst.n_add(); ++i) est *= i;
  est *= std::pow(std::max(1.0, static_cast<double>(inst.m_add())),
                  inst.n_add());
  return est;
}

std::string auto_select(const Instance& inst, double threshold) {
  if (inst.n_add() == 0)
    return inst.h().edge_count() == 0 ? "fixed-order" : "edges-fpt";
  if (inst.n_add() == 2 && inst.new_edges_with_old_endpoints().empty() &&
      !inst.has_parallel_edges())
    return "two-vertex";
  if (branch_estimate(inst) <= threshold) return "kappa-ell-fpt";
  return inst.has_parallel_edges() ? "oracle" : "xp";
}

SolveOutcome run_algorithm(const std::string& algo, const Instance& inst,
                           const SolveOptions& opts,
                           const OracleBudget& budget) {
  SolveOutcome out;
  {
    if (algo == "oracle") {
      OracleResult result = solve_brute_force(inst, budget);
      out.stats.branches_explored = result.steps;
      switch (result.status) {
        case OracleStatus::solved:
          out.status = "solved";
          out.layout = result.layout;
          out.stats.solutions_found = 1;
          break;
        case OracleStatus::unsolvable:
          out.status = "unsolvable";
          break;
        case OracleStatus::budget_exhausted:
          out.status = "budget-exhausted";
          break;
      }
    } else if (algo == "edges-fpt") {
      if (inst.n_add() != 0)
        throw precondition_error("edges-fpt needs V(H) = V(G)");
      SpineOrder spine(inst.g().vertex_count(), inst.h_vertices());
      auto layout = solve_edges_only(inst, spine, opts);
      out.stats.branches_explored = 1;
      if (layout) {
        out.status = "solved";
        out.layout = layout;
        out.stats.solutions_found = 1;
      } else {
        out.status = "unsolvable";
      }
    } else if (algo == "fixed-order") {
      if (inst.n_add() != 0)
        throw precondition_error("fixed-order needs V(H) = V(G)");
      SpineOrder spine(inst.g().vertex_count(), inst.h_vertices());
      std::map<int, int> precolored;
      for (std::size_t i = 0; i < inst.old_edges().size(); ++i)
        precolored[inst.old_edge_g_indices()[i]] = inst.old_pages()[i];
      auto layout = fixed_order_assign(inst.g(), spine, inst.ell(),
                                       precolored);
      out.stats.branches_explored = 1;
      if (layout) {
        out.status = "solved";
        out.layout = layout;
        out.stats.solutions_found = 1;
      } else {
        out.status = "unsolvable";
      }
    } else if (algo == "xp") {
      auto result = solve_xp(inst, opts, &out.stats);
      if (result) {
        out.status = "solved";
        out.layout = result->first;
      } else {
        out.status = "unsolvable";
      }
    } else if (algo == "kappa-ell-fpt") {
      auto result = solve_fpt_kappa_ell(inst, opts, &out.stats);
      if (result) {
        out.status = "solved";
        out.layout = result->first;
      } else {
        out.status = "unsolvable";
      }
    } else if (algo == "two-vertex") {
      auto result = solve_two_vertices(inst, opts, &out.stats);
      if (result) {
        out.status = "solved";
        out.layout = result->first;
      } else {
        out.status = "unsolvable";
      }
    } else {
      throw precondition_error("unknown algorithm '" + algo + "'");
    }
  }
  return out;
}

int cmd_validate(const std::string& instance_path,
                 const std::string& solution_path) {
  InstanceDoc doc = parse_instance(slurp(instance_path), false);
  auto report = validate_layout(doc.instance.h(), doc.instance.layout_h());
  bool valid = report.ok;
  if (!report.ok) {
    std::cout << "layout of H has " << report.violations.size()
              << " same-page nesting pair(s):\n";
    for (auto [i, j] : report.violations) {
      const Graph& h = doc.instance.h();
      Edge a = h.edges()[i], b = h.edges()[j];
      std::cout << "  " << h.name_of(a.u) << "--" << h.name_of(a.v) << "  "
                << h.name_of(b.u) << "--" << h.name_of(b.v) << "\n";
    }
  } else {
    std::cout << "layout of H: valid\n";
  }
  if (!solution_path.empty()) {
    SolutionDoc solution = parse_solution(doc.instance, slurp(solution_path));
    auto sol_report = validate_layout(doc.instance.g(), solution.layout);
    bool sol_extends =
        extends(doc.instance.g(), solution.layout, doc.instance.h(),
                doc.instance.layout_h());
    if (!sol_report.ok) {
      std::cout << "solution has " << sol_report.violations.size()
                << " same-page nesting pair(s):\n";
      const Graph& g = doc.instance.g();
      for (auto [i, j] : sol_report.violations) {
        Edge a = g.edges()[i], b = g.edges()[j];
        std::cout << "  " << g.name_of(a.u) << "--" << g.name_of(a.v) << "  "
                  << g.name_of(b.u) << "--" << g.name_of(b.v) << "\n";
      }
    }
    if (!sol_extends)
      std::cout << "solution does not extend the layout of H\n";
    if (sol_report.ok && sol_extends) std::cout << "solution: valid\n";
    valid = valid && sol_report.ok && sol_extends;
  }
  return valid ? kExitSolved : kExitUnsolvable;
}

int cmd_solve(const std::string& instance_path, std::string algo,
              const std::string& out_path, unsigned jobs,
              std::uint64_t budget, double threshold, bool iterative_prune) {
  InstanceDoc doc = parse_instance(slurp(instance_path), true);
  const Instance& inst = doc.instance;
  if (algo == "auto") algo = auto_select(inst, threshold);

  SolveOptions opts;
  opts.jobs = jobs;
  opts.iterative_prune = iterative_prune;
  OracleBudget oracle_budget;
  oracle_budget.max_branches = budget;

  auto start = std::chrono::steady_clock::now();
  SolveOutcome outcome = run_algorithm(algo, inst, opts, oracle_budget);
  auto stop = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(stop - start).count();
  std::cerr << algo << ": " << outcome.status << " in " << ms << " ms\n";

  if (outcome.status == "solved") {
    std::string text =
        serialize_solution(inst, *outcome.layout, algo, outcome.stats);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << text;
    }
    return kExitSolved;
  }
  if (outcome.status == "unsolvable") return kExitUnsolvable;
  return kExitBudget;
}

MccInstance parse_mcc_file(const std::string& text) {
  MccInstance mcc;
  std::istringstream in(text);
  std::string line;
  std::vector<std::tuple<std::string, std::string>> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      std::string name;
      int color;
      if (!(fields >> name >> color))
        throw parse_error("clique-graph file line " + std::to_string(line_no) +
                          ": expected 'v NAME COLOR'");
      mcc.graph.add_vertex(name);
      mcc.color_of.push_back(color);
      mcc.k = std::max(mcc.k, color);
    } else if (kind == "e") {
      std::string a, b;
      if (!(fields >> a >> b))
        throw parse_error("clique-graph file line " + std::to_string(line_no) +
                          ": expected 'e A B'");
      edges.emplace_back(a, b);
    } else {
      throw parse_error("clique-graph file line " + std::to_string(line_no) +
                        ": unknown record '" + kind + "'");
    }
  }
  for (const auto& [a, b] : edges) mcc.graph.add_edge(a, b);
  return mcc;
}

int cmd_gen_mcc(const std::string& path, bool simple) {
  MccInstance mcc = parse_mcc_file(slurp(path));
  ReductionArtifacts art = reduce_mcc(mcc, simple);
  nlohmann::ordered_json meta;
  meta["generator"] = "mcc";
  meta["k"] = mcc.k;
  meta["simple"] = simple;
  meta["dummy_page"] = art.dummy_page + 1;
  nlohmann::ordered_json gadget_pages = nlohmann::ordered_json::object();
  for (std::size_t e = 0; e < art.gc_edges.size(); ++e) {
    auto [u, v] = art.gc_edges[e];
    gadget_pages[mcc.graph.name_of(u) + "--" + mcc.graph.name_of(v)] =
        art.page_of_edge[e] + 1;
  }
  meta["gadget_pages"] = std::move(gadget_pages);
  nlohmann::ordered_json intervals = nlohmann::ordered_json::object();
  for (int v = 0; v < mcc.graph.vertex_count(); ++v)
    intervals[mcc.graph.name_of(v)] = {art.interval_of[v].first,
                                       art.interval_of[v].second};
  meta["interval_of"] = std::move(intervals);
  meta["new_vertices"] = art.new_vertices;
  std::cout << serialize_instance(art.instance, meta);
  return kExitSolved;
}

int cmd_gen_random(const RandomGenConfig& cfg) {
  GeneratedInstance generated = gen_random(cfg);
  nlohmann::ordered_json meta;
  meta["generator"] = "random";
  meta["seed"] = cfg.seed;
  meta["vertex_count"] = cfg.vertex_count;
  meta["edge_probability"] = cfg.edge_probability;
  meta["page_count"] = cfg.page_count;
  meta["delete_vertices"] = cfg.delete_vertices;
  meta["delete_edges"] = cfg.delete_edges;
  meta["shrink_pages"] = cfg.shrink_pages;
  meta["known_solvable"] = generated.known_solvable;
  std::cout << serialize_instance(generated.instance, meta);
  return kExitSolved;
}

int cmd_bench(const std::string& dir, const std::string& algos_csv,
              unsigned jobs, std::uint64_t budget) {
  std::vector<std::pair<std::string, Instance>> instances;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    InstanceDoc doc = parse_instance(slurp(path.string()), true);
    instances.emplace_back(path.filename().string(),
                           std::move(doc.instance));
  }

  std::vector<BenchAlgo> algos;
  std::istringstream names(algos_csv);
  std::string name;
  while (std::getline(names, name, ',')) {
    if (name.empty()) continue;
    OracleBudget oracle_budget;
    oracle_budget.max_branches = budget;
    algos.push_back(BenchAlgo{
        name,
        [name, oracle_budget, jobs](const Instance& inst) -> BenchAlgoResult {
          SolveOptions opts;
          opts.jobs = jobs;  // branch counts stay deterministic regardless
          std::string resolved = name;
          if (resolved == "auto") resolved = auto_select(inst, 1e7);
          try {
            SolveOutcome outcome =
                run_algorithm(resolved, inst, opts, oracle_budget);
            return BenchAlgoResult{outcome.status,
                                   outcome.stats.branches_explored,
                                   outcome.layout};
          } catch (const precondition_error&) {
            return BenchAlgoResult{"inapplicable", 0, std::nullopt};
          }
        }});
  }

  BenchOutcome outcome = run_bench(instances, algos, jobs);
  std::cout << to_csv(outcome.rows);
  if (outcome.disagreement) {
    std::cerr << "solver disagreement: " << outcome.detail << "\n";
    return kExitDisagreement;
  }
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"queue layout extension solver toolkit"};
  app.require_subcommand(1);

  std::string instance_path, solution_path, out_path, algo = "auto";
  unsigned jobs = default_jobs();
  std::uint64_t budget = OracleBudget{}.max_branches;
  double threshold = 1e7;
  bool iterative_prune = false;

  CLI::App* validate = app.add_subcommand("validate", "check files");
  validate->add_option("instance", instance_path, "instance file")
      ->required();
  validate->add_option("solution", solution_path, "solution file");

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--algo", algo,
                    "auto|oracle|edges-fpt|xp|kappa-ell-fpt|two-vertex|"
                    "fixed-order");
  solve->add_option("-o,--output", out_path, "solution file (default stdout)");
  solve->add_option("--jobs", jobs, "parallel branch workers");
  solve->add_option("--budget", budget, "oracle branch budget");
  solve->add_option("--auto-threshold", threshold,
                    "branch estimate above which auto prefers xp");
  solve->add_flag("--iterative-prune", iterative_prune,
                  "re-derive the edge-pruning threshold after each removal");

  CLI::App* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  CLI::App* gen_mcc = gen->add_subcommand(
      "mcc", "hardness reduction from a colored clique graph");
  std::string mcc_path;
  bool simple = false;
  gen_mcc->add_option("graph", mcc_path, "clique-graph file (v/e records)")
      ->required();
  gen_mcc->add_flag("--simple", simple, "avoid parallel edges in H");
  CLI::App* gen_random = gen->add_subcommand("random", "random instance");
  RandomGenConfig cfg;
  gen_random->add_option("--vertices", cfg.vertex_count, "vertex count");
  gen_random->add_option("--edge-prob", cfg.edge_probability,
                         "edge probability");
  gen_random->add_option("--pages", cfg.page_count, "page count");
  gen_random->add_option("--delete-vertices", cfg.delete_vertices,
                         "vertices missing from H");
  gen_random->add_option("--delete-edges", cfg.delete_edges,
                         "extra edges missing from H");
  gen_random->add_flag("--shrink-pages", cfg.shrink_pages,
                       "lower ell to the pages H uses");
  gen_random->add_option("--seed", cfg.seed, "random seed");

  CLI::App* bench = app.add_subcommand("bench", "run solvers over a directory");
  std::string bench_dir, algos_csv = "auto";
  bench->add_option("dir", bench_dir, "directory of instance files")
      ->required();
  bench->add_option("--algos", algos_csv, "comma-separated algorithm list");
  bench->add_option("--jobs", jobs, "parallel workers");
  bench->add_option("--budget", budget, "oracle branch budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(instance_path, solution_path);
    if (solve->parsed())
      return cmd_solve(instance_path, algo, out_path, jobs, budget, threshold,
                       iterative_prune);
    if (gen->parsed()) {
      if (gen_mcc->parsed()) return cmd_gen_mcc(mcc_path, simple);
      return cmd_gen_random(cfg);
    }
    if (bench->parsed()) return cmd_bench(bench_dir, algos_csv, jobs, budget);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
