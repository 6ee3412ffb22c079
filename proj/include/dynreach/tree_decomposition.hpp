#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynreach/graph.hpp"

namespace dynreach {

/// Rooted tree of bags. Tree nodes are dense indices 0..m-1; `parent[i]` is -1
/// for the root. Bags are kept sorted.
struct TreeDecomposition {
  std::vector<int> parent;
  std::vector<std::vector<Node>> bags;

  std::size_t tree_size() const { return parent.size(); }
  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

/// Derived shape of a structurally sound decomposition (single root, acyclic).
struct TreeShape {
  int root = -1;
  std::vector<std::vector<int>> children;
  std::vector<int> height;      // leaf = 1, inner = 1 + max child height
  std::vector<int> level;       // root = 0
  std::vector<int> top_down;    // BFS order from the root
  int depth = 0;                // edges on a longest root-leaf path
  int width = -1;               // max bag size - 1
  std::size_t max_children = 0;
};

/// Throws PreconditionError when the parent map is not a single rooted tree.
TreeShape analyze_shape(const TreeDecomposition& t);

/// Highest bag containing each graph node, std::nullopt for uncovered nodes.
std::vector<std::optional<int>> highest_bags(const TreeDecomposition& t, const TreeShape& shape,
                                             std::size_t node_count);

enum class DecompositionViolation {
  kStructure,
  kNodeOutOfRange,
  kNodeUncovered,
  kEdgeUncovered,
  kOccurrenceDisconnected,
};

struct DecompositionIssue {
  DecompositionViolation kind;
  std::string detail;
};

struct DecompositionReport {
  std::vector<DecompositionIssue> issues;
  int width = -1;
  int depth = 0;
  std::size_t max_degree = 0;
  bool binary = false;

  bool valid() const { return issues.empty(); }
  bool has(DecompositionViolation kind) const;
};

DecompositionReport validate_tree_decomposition(const Graph& g, const TreeDecomposition& t);

/// Splits every tree node with more than two children into a spine of copies
/// of its bag. Width is preserved; depth grows by up to the degree per level.
TreeDecomposition binarize_decomposition(const TreeDecomposition& t);

}  // namespace dynreach
