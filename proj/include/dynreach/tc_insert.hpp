#pragma once

#include <cstddef>

#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"

namespace dynreach {

/// Transitive closure of a directed graph under bulk edge insertions.
///
/// Each batch E+ is compressed into a graph H on the affected nodes whose
/// edges are E+ plus every already-reachable pair among them. The closure of H
/// is the closure of the new graph restricted to the affected nodes, and every
/// new path splits into old prefix, H-path, old suffix.
class TcInsertEngine {
 public:
  struct Stats {
    std::size_t h_nodes = 0;
    std::size_t h_edges = 0;
  };

  /// Edgeless graph on n >= 1 nodes with empty closure.
  explicit TcInsertEngine(std::size_t n);

  /// Requires eplus disjoint from the current edges.
  void bulk_insert(const EdgeSet& eplus);

  /// Reachability; a node always reaches itself.
  bool query(Node a, Node b) const;

  const Graph& graph() const { return graph_; }
  /// Irreflexive closure Ans.
  const Relation& closure() const { return ans_; }
  const Stats& last_stats() const { return stats_; }

 private:
  Graph graph_;
  Relation ans_;
  Stats stats_;
};

}  // namespace dynreach
