#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynreach {

using Node = std::uint32_t;

struct Edge {
  Node from = 0;
  Node to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
  Edge reversed() const { return {to, from}; }
};

using EdgeSet = std::set<Edge>;

/// Raised when an operation's precondition on its inputs does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by exhaustive enumerators when an instance exceeds their size guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Directedness { kDirected, kUndirected };

/// Node count plus a directed edge set over nodes 0..n-1.
///
/// Undirected graphs keep both orientations of every edge, so the stored edge
/// set is always the directed view. No self-loops, no duplicates.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, Directedness kind = Directedness::kDirected);

  std::size_t node_count() const { return succ_.size(); }
  bool directed() const { return kind_ == Directedness::kDirected; }
  Directedness kind() const { return kind_; }

  /// Number of stored directed edges (twice the undirected count when undirected).
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(Node u, Node v) const;
  bool has_edge(Edge e) const { return has_edge(e.from, e.to); }

  /// Adds (u,v), plus (v,u) for undirected graphs. Throws on self-loops,
  /// out-of-range nodes and already-present edges.
  void add_edge(Node u, Node v);
  void remove_edge(Node u, Node v);

  const std::set<Node>& successors(Node u) const { return succ_.at(u); }

  /// All stored directed edges in lexicographic order.
  std::vector<Edge> edges() const;

  /// One edge per unordered pair (u < v) for undirected graphs; all edges otherwise.
  std::vector<Edge> canonical_edges() const;

  /// Both orientations of every edge, as a directed graph.
  Graph bidirected() const;

  /// Undirected degree: number of distinct neighbours over both orientations.
  std::size_t degree(Node u) const;
  std::size_t max_degree() const;

  void check_node(Node u) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Directedness kind_ = Directedness::kDirected;
  std::vector<std::set<Node>> succ_;
  std::vector<std::set<Node>> pred_;
  std::size_t edge_count_ = 0;
};

/// One change step: inserted edges E+ and deleted edges E-.
struct BulkChange {
  EdgeSet inserted;
  EdgeSet deleted;

  bool empty() const { return inserted.empty() && deleted.empty(); }
  std::size_t size() const { return inserted.size() + deleted.size(); }
  friend bool operator==(const BulkChange&, const BulkChange&) = default;
};

/// Drops inserts of present edges and deletes of absent ones. An edge in both
/// sets nets to absent: it leaves E+ and stays in E- only if currently present.
/// For undirected graphs pairs are canonicalised to (min, max).
BulkChange normalize_change(const Graph& g, const BulkChange& c);

/// Returns g with E+ added, then E- removed. Rejects non-normalized changes.
Graph apply_change(const Graph& g, const BulkChange& c);

/// Endpoints of all edges in E+ and E-, ascending.
std::vector<Node> affected_nodes(const BulkChange& c);
std::vector<Node> affected_nodes(const EdgeSet& edges);

std::string to_string(Edge e);

}  // namespace dynreach
