#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynreach/graph.hpp"
#include "dynreach/tree_decomposition.hpp"

namespace dynreach {

/// G(n, p): every ordered pair (unordered when undirected) independently.
Graph random_gnp(std::size_t n, double p, std::uint64_t seed, Directedness kind = Directedness::kDirected);

/// q disjoint directed paths of `length` nodes each, node ids shuffled by seed.
Graph path_union(std::size_t q, std::size_t length, std::uint64_t seed);

struct PartialKTreeOptions {
  double edge_probability = 0.6;
  /// 0 means no cap.
  std::size_t max_degree = 0;
  Directedness kind = Directedness::kUndirected;
};

struct GeneratedInstance {
  Graph graph;
  TreeDecomposition decomposition;
};

/// Graph of treewidth <= k with a binary decomposition of logarithmic depth.
/// Bags are built top-down: each keeps up to k nodes of its parent's bag and
/// adds fresh ones; the nodes still to place are split evenly between two
/// children. Edges are drawn inside bags; ids are shuffled at the end.
GeneratedInstance partial_k_tree(std::size_t n, std::size_t k, std::uint64_t seed,
                                 const PartialKTreeOptions& options = {});

struct ScriptOptions {
  std::size_t steps = 10;
  std::size_t max_batch = 4;
  /// Probability that a single edit is a deletion (when an edge exists).
  double delete_probability = 0.0;
};

/// Normalized changes against the evolving graph, starting from g.
std::vector<BulkChange> random_change_script(const Graph& g, std::uint64_t seed, const ScriptOptions& options);

}  // namespace dynreach
