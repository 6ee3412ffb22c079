#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"

namespace dynreach {

/// Undirected connectivity under bulk insertions and deletions, maintained
/// through a rooted spanning forest S (child -> parent) and its ancestor
/// closure TC_S. Roots are always the minimum node of their component.
///
/// Both update kinds contract the change into a small graph H whose nodes are
/// the minimum affected node of each touched tree; a BFS forest of H picks
/// which trees to join, and the lexicographically least realizing edge joins
/// them. Joins are processed in lexicographic order of the H-forest edges.
class ForestEngine {
 public:
  struct Stats {
    std::size_t h_nodes = 0;
    std::size_t h_edges = 0;
    std::size_t promoted = 0;  // edges that became tree edges
    std::size_t cut = 0;       // tree edges removed
  };

  explicit ForestEngine(std::size_t n);

  /// Pairs are unordered; requires each to be absent from the graph.
  void bulk_insert(const EdgeSet& eplus);
  /// Pairs are unordered; requires each to be present in the graph.
  void bulk_delete(const EdgeSet& eminus);
  /// Insertions first, then deletions.
  void apply(const BulkChange& change);

  bool query(Node a, Node b) const;

  const Graph& graph() const { return graph_; }
  const std::vector<std::optional<Node>>& parents() const { return parent_; }
  /// (u, v) present iff v is a proper ancestor of u.
  const Relation& ancestors() const { return tc_; }
  Node root(Node v) const { return roots_.at(v); }
  const Stats& last_stats() const { return stats_; }

 private:
  void reroot(Node x);
  void join_trees(const std::vector<Node>& affected, const std::vector<Edge>& candidates);
  void normalize_roots();
  void rebuild_closure();
  EdgeSet canonical_pairs(const EdgeSet& edges) const;

  Graph graph_;
  std::vector<std::optional<Node>> parent_;
  Relation tc_;
  std::vector<Node> roots_;
  Stats stats_;
};

/// First violated forest invariant, checked against the brute-force oracle:
/// S spans G, is acyclic, uses only graph edges, has minimum-node roots, and
/// TC_S equals the ancestor closure of S.
std::optional<std::string> forest_invariant_violation(const ForestEngine& engine);

}  // namespace dynreach
