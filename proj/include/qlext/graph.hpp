#pragma once

#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qlext/error.hpp"

namespace qlext {

/// Unordered vertex pair over internal indices, normalized so that u < v.
struct Edge {
  int u = -1;
  int v = -1;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b)
      throw validation_error("self-loop on vertex index " + std::to_string(a));
  }

  bool touches(int w) const { return u == w || v == w; }
  int other(int w) const { return w == u ? v : u; }
  bool shares_endpoint(const Edge& o) const {
    return touches(o.u) || touches(o.v);
  }

  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph. Vertices are opaque string tokens at the
/// interface and dense integer indices internally; all algorithms run on the
/// indices. Parallel edges are rejected unless the graph was constructed with
/// allow_parallel (used only by the hardness-reduction generator).
class Graph {
 public:
  Graph() = default;
  explicit Graph(bool allow_parallel) : allow_parallel_(allow_parallel) {}

  int add_vertex(const std::string& name) {
    if (index_.count(name))
      throw validation_error("duplicate vertex token '" + name + "'");
    names_.push_back(name);
    index_.emplace(name, static_cast<int>(names_.size()) - 1);
    return static_cast<int>(names_.size()) - 1;
  }

  int add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    Edge e(u, v);
    if (!allow_parallel_ && edge_set_.count(e))
      throw validation_error("duplicate edge " + name_of(e.u) + "--" +
                             name_of(e.v));
    edges_.push_back(e);
    if (edge_set_.count(e)) has_parallel_ = true;
    edge_set_.emplace(e, static_cast<int>(edges_.size()) - 1);
    return static_cast<int>(edges_.size()) - 1;
  }

  int add_edge(const std::string& a, const std::string& b) {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia) throw validation_error("unknown vertex token '" + a + "'");
    if (!ib) throw validation_error("unknown vertex token '" + b + "'");
    return add_edge(*ia, *ib);
  }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& name_of(int v) const {
    check_vertex(v);
    return names_[v];
  }

  std::optional<int> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool has_vertex(const std::string& name) const { return index_.count(name); }

  const std::vector<std::string>& vertex_names() const { return names_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int u, int v) const {
    if (u == v) return false;
    return edge_set_.count(Edge(u, v)) > 0;
  }

  /// Index of the first list entry with these endpoints, if any.
  std::optional<int> edge_index(Edge e) const {
    auto it = edge_set_.find(e);
    if (it == edge_set_.end()) return std::nullopt;
    return it->second;
  }

  bool allows_parallel() const { return allow_parallel_; }
  bool has_parallel_edges() const { return has_parallel_; }

 private:
  struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
      return std::hash<long long>()((static_cast<long long>(e.u) << 32) ^
                                    static_cast<unsigned>(e.v));
    }
  };

  void check_vertex(int v) const {
    if (v < 0 || v >= vertex_count())
      throw precondition_error("vertex index " + std::to_string(v) +
                               " out of range");
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::unordered_map<Edge, int, EdgeHash> edge_set_;  // first occurrence
  bool allow_parallel_ = false;
  bool has_parallel_ = false;
};

/// Total order of a vertex subset along the spine. `order` lists vertex
/// indices left to right; `rank` is its inverse (relative to a fixed
/// universe size, -1 for vertices not placed).
class SpineOrder {
 public:
  SpineOrder() = default;

  SpineOrder(int universe_size, std::vector<int> order)
      : order_(std::move(order)), rank_(universe_size, -1) {
    for (int pos = 0; pos < static_cast<int>(order_.size()); ++pos) {
      int v = order_[pos];
      if (v < 0 || v >= universe_size)
        throw validation_error("spine vertex index " + std::to_string(v) +
                               " out of range");
      if (rank_[v] != -1)
        throw validation_error("vertex index " + std::to_string(v) +
                               " appears twice on the spine");
      rank_[v] = pos;
    }
  }

  int universe_size() const { return static_cast<int>(rank_.size()); }
  int size() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }

  int at(int pos) const { return order_.at(pos); }
  bool contains(int v) const {
    return v >= 0 && v < universe_size() && rank_[v] != -1;
  }

  int rank(int v) const {
    if (!contains(v))
      throw precondition_error("vertex index " + std::to_string(v) +
                               " is not on the spine");
    return rank_[v];
  }

  int try_rank(int v) const {
    if (v < 0 || v >= universe_size()) return -1;
    return rank_[v];
  }

 private:
  std::vector<int> order_;
  std::vector<int> rank_;
};

/// Page assignment, parallel to the owning graph's edge list. Pages are
/// 0-based internally; file formats are 1-based.
class PageAssignment {
 public:
  PageAssignment() = default;

  PageAssignment(int page_count, std::vector<int> pages)
      : page_count_(page_count), pages_(std::move(pages)) {
    if (page_count_ < 0) throw validation_error("negative page count");
    for (int p : pages_)
      if (p < 0 || p >= page_count_)
        throw validation_error("page index " + std::to_string(p) +
                               " outside [0," + std::to_string(page_count_) +
                               ")");
  }

  int page_count() const { return page_count_; }
  const std::vector<int>& pages() const { return pages_; }
  int page(int edge_index) const { return pages_.at(edge_index); }
  int size() const { return static_cast<int>(pages_.size()); }

 private:
  int page_count_ = 0;
  std::vector<int> pages_;
};

/// Spine order plus page assignment; valid iff no two same-page edges nest.
struct QueueLayout {
  SpineOrder spine;
  PageAssignment assignment;
};

}  // namespace qlext
