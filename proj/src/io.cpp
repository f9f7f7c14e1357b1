#include "qlext/io.hpp"

#include <map>

namespace qlext {

using nlohmann::ordered_json;

namespace {

ordered_json parse_json(const std::string& text, const char* what) {
  ordered_json doc = ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw parse_error(std::string(what) + ": malformed JSON");
  return doc;
}

const ordered_json& expect(const ordered_json& doc, const char* key,
                           const char* what) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw parse_error(std::string(what) + ": missing key '" + key + "'");
  return *it;
}

std::vector<std::string> string_array(const ordered_json& node,
                                      const char* key, const char* what) {
  if (!node.is_array())
    throw parse_error(std::string(what) + ": key '" + key +
                      "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string())
      throw parse_error(std::string(what) + ": key '" + key +
                        "' must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> edge_array(
    const ordered_json& node, const char* key, const char* what) {
  if (!node.is_array())
    throw parse_error(std::string(what) + ": key '" + key +
                      "' must be an array of vertex pairs");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : node) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
        !item[1].is_string())
      throw parse_error(std::string(what) + ": key '" + key +
                        "' must be an array of vertex pairs");
    out.emplace_back(item[0].get<std::string>(), item[1].get<std::string>());
  }
  return out;
}

// Stable page keys: "u--v" for the first copy of a pair, "#k" suffixes for
// further parallel copies, in edge-list order.
std::vector<std::string> page_keys(const Graph& g) {
  std::map<Edge, int> seen;
  std::vector<std::string> keys;
  for (const Edge& e : g.edges()) {
    int copy = ++seen[e];
    std::string key = g.name_of(e.u) + "--" + g.name_of(e.v);
    if (copy > 1) key += "#" + std::to_string(copy);
    keys.push_back(std::move(key));
  }
  return keys;
}

}  // namespace

InstanceDoc parse_instance(const std::string& text,
                           bool require_valid_layout) {
  const char* what = "instance file";
  ordered_json doc = parse_json(text, what);
  if (!doc.is_object())
    throw parse_error(std::string(what) + ": top level must be an object");

  const auto& ell_node = expect(doc, "ell", what);
  if (!ell_node.is_number_integer() || ell_node.get<long long>() < 1)
    throw parse_error(std::string(what) +
                      ": key 'ell' must be a positive integer");
  int ell = ell_node.get<int>();

  auto vertices_g = string_array(expect(doc, "vertices_g", what),
                                 "vertices_g", what);
  auto edges_g = edge_array(expect(doc, "edges_g", what), "edges_g", what);
  auto vertices_h = string_array(expect(doc, "vertices_h", what),
                                 "vertices_h", what);
  auto edges_h = edge_array(expect(doc, "edges_h", what), "edges_h", what);
  const auto& pages_node = expect(doc, "pages_h", what);
  if (!pages_node.is_array() || pages_node.size() != edges_h.size())
    throw parse_error(std::string(what) +
                      ": key 'pages_h' must parallel 'edges_h'");
  std::vector<int> pages_h;
  for (const auto& item : pages_node) {
    if (!item.is_number_integer() || item.get<long long>() < 1 ||
        item.get<long long>() > ell)
      throw parse_error(std::string(what) +
                        ": key 'pages_h' must hold pages in 1..ell");
    pages_h.push_back(item.get<int>() - 1);
  }

  Graph g(true), h(true);
  try {
    for (const auto& name : vertices_g) g.add_vertex(name);
  } catch (const validation_error& e) {
    throw parse_error(std::string(what) + ": key 'vertices_g': " + e.what());
  }
  try {
    for (const auto& [a, b] : edges_g) g.add_edge(a, b);
  } catch (const validation_error& e) {
    throw parse_error(std::string(what) + ": key 'edges_g': " + e.what());
  }
  try {
    for (const auto& name : vertices_h) h.add_vertex(name);
    for (const auto& [a, b] : edges_h) h.add_edge(a, b);
  } catch (const validation_error& e) {
    throw parse_error(std::string(what) + ": keys 'vertices_h'/'edges_h': " +
                      e.what());
  }

  std::vector<int> h_spine(h.vertex_count());
  for (int i = 0; i < h.vertex_count(); ++i) h_spine[i] = i;
  QueueLayout layout_h{SpineOrder(h.vertex_count(), h_spine),
                       PageAssignment(ell, pages_h)};
  InstanceDoc result{
      [&]() {
        try {
          // Structural checks only; layout validity is re-checked below so
          // that a nesting in H reads as an invalid instance, not a parse
          // failure.
          return Instance(ell, std::move(g), std::move(h),
                          std::move(layout_h), false);
        } catch (const validation_error& e) {
          throw parse_error(std::string(what) + ": " + e.what());
        }
      }(),
      doc.contains("meta") ? doc["meta"] : ordered_json()};
  if (require_valid_layout &&
      !validate_layout(result.instance.h(), result.instance.layout_h(), 1).ok)
    throw validation_error("the given layout of H is not a queue layout");
  return result;
}

std::string serialize_instance(const Instance& inst,
                               const ordered_json& meta) {
  const Graph& g = inst.g();
  const Graph& h = inst.h();
  ordered_json doc;
  doc["ell"] = inst.ell();
  ordered_json vg = ordered_json::array();
  for (const auto& name : g.vertex_names()) vg.push_back(name);
  doc["vertices_g"] = std::move(vg);
  ordered_json eg = ordered_json::array();
  for (const Edge& e : g.edges())
    eg.push_back({g.name_of(e.u), g.name_of(e.v)});
  doc["edges_g"] = std::move(eg);
  ordered_json vh = ordered_json::array();
  for (int v : inst.h_vertices()) vh.push_back(g.name_of(v));
  doc["vertices_h"] = std::move(vh);
  // Canonical orientation: spine order of H, so parse/serialize round-trips.
  ordered_json eh = ordered_json::array();
  for (const Edge& e : h.edges()) {
    bool in_order = inst.layout_h().spine.rank(e.u) <
                    inst.layout_h().spine.rank(e.v);
    int first = in_order ? e.u : e.v;
    eh.push_back({h.name_of(first), h.name_of(e.other(first))});
  }
  doc["edges_h"] = std::move(eh);
  ordered_json ph = ordered_json::array();
  for (int i = 0; i < h.edge_count(); ++i)
    ph.push_back(inst.layout_h().assignment.page(i) + 1);
  doc["pages_h"] = std::move(ph);
  if (!meta.is_null()) doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

std::string serialize_solution(const Instance& inst, const QueueLayout& layout,
                               const std::string& algorithm,
                               const BranchStats& stats) {
  const Graph& g = inst.g();
  if (layout.spine.size() != g.vertex_count() ||
      layout.assignment.size() != g.edge_count())
    throw precondition_error("solution does not cover the instance's graph");
  ordered_json doc;
  ordered_json spine = ordered_json::array();
  for (int v : layout.spine.order()) spine.push_back(g.name_of(v));
  doc["spine"] = std::move(spine);
  ordered_json pages = ordered_json::object();
  std::vector<std::string> keys = page_keys(g);
  for (int i = 0; i < g.edge_count(); ++i)
    pages[keys[i]] = layout.assignment.page(i) + 1;
  doc["pages"] = std::move(pages);
  doc["algorithm"] = algorithm;
  doc["stats"] = {{"branches_explored", stats.branches_explored},
                  {"branches_pruned", stats.branches_pruned},
                  {"solutions_found", stats.solutions_found}};
  return doc.dump(2) + "\n";
}

SolutionDoc parse_solution(const Instance& inst, const std::string& text) {
  const char* what = "solution file";
  const Graph& g = inst.g();
  ordered_json doc = parse_json(text, what);
  if (!doc.is_object())
    throw parse_error(std::string(what) + ": top level must be an object");

  auto spine_tokens = string_array(expect(doc, "spine", what), "spine", what);
  if (static_cast<int>(spine_tokens.size()) != g.vertex_count())
    throw parse_error(std::string(what) +
                      ": key 'spine' must list every vertex of G exactly once");
  std::vector<int> order;
  for (const auto& token : spine_tokens) {
    auto idx = g.index_of(token);
    if (!idx)
      throw parse_error(std::string(what) + ": key 'spine': unknown vertex '" +
                        token + "'");
    order.push_back(*idx);
  }
  SpineOrder spine;
  try {
    spine = SpineOrder(g.vertex_count(), order);
  } catch (const validation_error& e) {
    throw parse_error(std::string(what) + ": key 'spine': " + e.what());
  }

  const auto& pages_node = expect(doc, "pages", what);
  if (!pages_node.is_object())
    throw parse_error(std::string(what) + ": key 'pages' must be an object");
  std::vector<std::string> keys = page_keys(g);
  std::vector<int> pages(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) {
    auto it = pages_node.find(keys[i]);
    if (it == pages_node.end())
      throw parse_error(std::string(what) + ": key 'pages': missing edge '" +
                        keys[i] + "'");
    if (!it->is_number_integer() || it->get<long long>() < 1 ||
        it->get<long long>() > inst.ell())
      throw parse_error(std::string(what) + ": key 'pages': edge '" + keys[i] +
                        "' needs a page in 1..ell");
    pages[i] = it->get<int>() - 1;
  }
  if (pages_node.size() != static_cast<std::size_t>(g.edge_count()))
    throw parse_error(std::string(what) +
                      ": key 'pages' mentions an unknown edge");

  SolutionDoc result{QueueLayout{std::move(spine),
                                 PageAssignment(inst.ell(), std::move(pages))},
                     "", BranchStats{}};
  if (doc.contains("algorithm") && doc["algorithm"].is_string())
    result.algorithm = doc["algorithm"].get<std::string>();
  if (doc.contains("stats") && doc["stats"].is_object()) {
    const auto& stats = doc["stats"];
    if (stats.contains("branches_explored"))
      result.stats.branches_explored =
          stats["branches_explored"].get<std::uint64_t>();
    if (stats.contains("branches_pruned"))
      result.stats.branches_pruned =
          stats["branches_pruned"].get<std::uint64_t>();
    if (stats.contains("solutions_found"))
      result.stats.solutions_found =
          stats["solutions_found"].get<std::uint64_t>();
  }
  return result;
}

}  // namespace qlext
