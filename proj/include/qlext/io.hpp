#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "qlext/branch.hpp"
#include "qlext/core.hpp"

namespace qlext {

/// Instance file plus its free-form metadata block.
struct InstanceDoc {
  Instance instance;
  nlohmann::ordered_json meta;  // null when absent
};

/// Parses the JSON instance format. Structural problems raise parse_error
/// naming the offending key; with require_valid_layout the layout of H must
/// additionally be nesting-free (validation_error otherwise).
InstanceDoc parse_instance(const std::string& text,
                           bool require_valid_layout = true);

/// Canonical serialization: 1-based pages, vertices_h in spine order, two
/// space indentation, trailing newline. parse -> serialize -> parse is the
/// identity on files produced here.
std::string serialize_instance(const Instance& inst,
                               const nlohmann::ordered_json& meta =
                                   nlohmann::ordered_json());

struct SolutionDoc {
  QueueLayout layout;  // over the instance's G
  std::string algorithm;
  BranchStats stats;
};

/// Solution files key pages by "u--v" (the k-th parallel copy of a pair gets
/// a "#k" suffix). Keys are generated from the instance's edge list on both
/// ends, so tokens containing "--" stay unambiguous.
std::string serialize_solution(const Instance& inst, const QueueLayout& layout,
                               const std::string& algorithm,
                               const BranchStats& stats);

/// Structural parse against the owning instance (every edge keyed, spine a
/// permutation of V(G), pages in range). Semantic validity is the caller's
/// business via validate_layout / extends.
SolutionDoc parse_solution(const Instance& inst, const std::string& text);

}  // namespace qlext
