#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qlext/branch.hpp"
#include "qlext/core.hpp"

namespace qlext {

struct Lit {
  int var = 0;
  bool positive = true;
};

struct TwoSatFormula {
  int variable_count = 0;
  std::vector<std::pair<Lit, Lit>> clauses;

  void add_clause(Lit a, Lit b) { clauses.emplace_back(a, b); }
  void add_unit(Lit a) { clauses.emplace_back(a, a); }
  void add_implication(Lit a, Lit b) {
    add_clause(Lit{a.var, !a.positive}, b);
  }
};

/// Satisfying assignment via strongly connected components of the
/// implication graph, valued in reverse topological order. Linear in
/// clauses + variables.
std::optional<std::vector<bool>> solve_2sat(const TwoSatFormula& f);

/// Order constraints for the spine positions of new-edge endpoints: always
/// a total order on the new vertices, optionally interleaving any old
/// endpoints whose relative position should be pinned as well (old-old
/// pairs always follow the spine of H).
struct EndpointOrder {
  std::vector<int> order;  // G vertex ids
};

/// One variable per (new vertex, old vertex) pair whose order the endpoint
/// order does not already determine; truth means "the new vertex precedes
/// the old one". Pairs fixed by the spine of H or by the endpoint order are
/// substituted as constants at construction, so antisymmetry needs no
/// clauses.
struct OrderVariableMap {
  std::map<std::pair<int, int>, int> var_of;  // (new u, old w) -> variable
};

struct Encoding {
  TwoSatFormula formula;
  OrderVariableMap vars;
};

/// Encodes "does a spine extending H and the endpoint order exist that makes
/// sigma a valid layout" as implications over the order variables. Returns
/// nothing if sigma plus the endpoint order already force a same-page
/// nesting among edges whose endpoint order is fully determined.
/// `sigma` maps every G edge-list index to a 0-based page.
std::optional<Encoding> encode_instance(const Instance& inst,
                                        const std::vector<int>& sigma,
                                        const EndpointOrder& eo);

/// Reads the new vertices' spine positions off a satisfying assignment.
/// Raises internal_error if the assignment is not order-consistent (which
/// the formula rules out, so it would be a bug).
SpineOrder decode_spine(const Instance& inst, const EndpointOrder& eo,
                        const Encoding& enc,
                        const std::vector<bool>& assignment);

/// Old endpoints that can be interleaved with the new vertices (those of
/// new edges with a new endpoint), in spine order of H.
std::vector<int> endpoint_order_domain_old(const Instance& inst);

/// Number of full interleavings of the new vertices with those endpoints.
std::uint64_t endpoint_order_count(const Instance& inst);

/// Unranks one full interleaving (insertion-digit encoding, lexicographic).
EndpointOrder endpoint_order_at(const Instance& inst, std::uint64_t index);

/// FPT(kappa + ell) driver: enumerates page assignments of the new edges
/// (base-ell counter over the canonical edge order) times the internal
/// orders of the new vertices, and runs encode + solve + decode on each
/// branch; the encoding leaves new-vs-old positions to the solver, so
/// ell^m_add * n_add! branches suffice. Deterministic first success for any
/// jobs value.
std::optional<std::pair<QueueLayout, BranchStats>> solve_fpt_kappa_ell(
    const Instance& inst, const SolveOptions& opts = {},
    BranchStats* stats_out = nullptr);

}  // namespace qlext
