#include "dynreach/tree_decomposition.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dynreach {

TreeShape analyze_shape(const TreeDecomposition& t) {
  const std::size_t m = t.tree_size();
  if (m == 0) throw PreconditionError("tree decomposition has no tree nodes");
  if (t.bags.size() != m) throw PreconditionError("bag count differs from tree node count");

  TreeShape shape;
  shape.children.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    const int p = t.parent[i];
    if (p == -1) {
      if (shape.root != -1) throw PreconditionError("tree decomposition has several roots");
      shape.root = static_cast<int>(i);
    } else if (p < 0 || static_cast<std::size_t>(p) >= m || p == static_cast<int>(i)) {
      throw PreconditionError("tree node " + std::to_string(i) + " has invalid parent");
    } else {
      shape.children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
    }
  }
  if (shape.root == -1) throw PreconditionError("tree decomposition has no root");

  shape.level.assign(m, -1);
  std::deque<int> queue{shape.root};
  shape.level[static_cast<std::size_t>(shape.root)] = 0;
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    shape.top_down.push_back(i);
    for (int c : shape.children[static_cast<std::size_t>(i)]) {
      shape.level[static_cast<std::size_t>(c)] = shape.level[static_cast<std::size_t>(i)] + 1;
      queue.push_back(c);
    }
  }
  if (shape.top_down.size() != m) throw PreconditionError("tree decomposition parent map has a cycle");

  shape.height.assign(m, 1);
  for (auto it = shape.top_down.rbegin(); it != shape.top_down.rend(); ++it) {
    const auto i = static_cast<std::size_t>(*it);
    for (int c : shape.children[i]) {
      shape.height[i] = std::max(shape.height[i], shape.height[static_cast<std::size_t>(c)] + 1);
    }
    shape.max_children = std::max(shape.max_children, shape.children[i].size());
    shape.width = std::max(shape.width, static_cast<int>(t.bags[i].size()) - 1);
  }
  shape.depth = shape.height[static_cast<std::size_t>(shape.root)] - 1;
  return shape;
}

std::vector<std::optional<int>> highest_bags(const TreeDecomposition& t, const TreeShape& shape,
                                             std::size_t node_count) {
  std::vector<std::optional<int>> best(node_count);
  for (int i : shape.top_down) {
    for (Node v : t.bags[static_cast<std::size_t>(i)]) {
      if (v < node_count && !best[v]) best[v] = i;
    }
  }
  return best;
}

bool DecompositionReport::has(DecompositionViolation kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](const DecompositionIssue& issue) { return issue.kind == kind; });
}

DecompositionReport validate_tree_decomposition(const Graph& g, const TreeDecomposition& t) {
  DecompositionReport report;
  TreeShape shape;
  try {
    shape = analyze_shape(t);
  } catch (const PreconditionError& e) {
    report.issues.push_back({DecompositionViolation::kStructure, e.what()});
    return report;
  }
  report.width = shape.width;
  report.depth = shape.depth;
  report.max_degree = shape.max_children;
  report.binary = shape.max_children <= 2;

  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> occurrences(n);
  for (std::size_t i = 0; i < t.tree_size(); ++i) {
    for (Node v : t.bags[i]) {
      if (v >= n) {
        report.issues.push_back({DecompositionViolation::kNodeOutOfRange,
                                 "bag " + std::to_string(i) + " lists node " + std::to_string(v)});
      } else {
        occurrences[v].push_back(static_cast<int>(i));
      }
    }
  }

  for (Node v = 0; v < n; ++v) {
    if (occurrences[v].empty()) {
      report.issues.push_back({DecompositionViolation::kNodeUncovered,
                               "node " + std::to_string(v) + " in no bag"});
      continue;
    }
    // Connected iff exactly one occurrence has its parent outside the occurrence set.
    std::set<int> in(occurrences[v].begin(), occurrences[v].end());
    int tops = 0;
    for (int i : occurrences[v]) {
      const int p = t.parent[static_cast<std::size_t>(i)];
      if (p == -1 || !in.contains(p)) ++tops;
    }
    if (tops != 1) {
      report.issues.push_back({DecompositionViolation::kOccurrenceDisconnected,
                               "bags containing node " + std::to_string(v) + " are disconnected"});
    }
  }

  for (Edge e : g.canonical_edges()) {
    const bool covered = std::any_of(t.bags.begin(), t.bags.end(), [&](const std::vector<Node>& bag) {
      return std::binary_search(bag.begin(), bag.end(), e.from) &&
             std::binary_search(bag.begin(), bag.end(), e.to);
    });
    if (!covered) {
      report.issues.push_back({DecompositionViolation::kEdgeUncovered,
                               "edge " + to_string(e) + " in no bag"});
    }
  }
  return report;
}

TreeDecomposition binarize_decomposition(const TreeDecomposition& t) {
  const TreeShape shape = analyze_shape(t);
  if (shape.max_children <= 2) return t;

  TreeDecomposition out = t;
  for (std::size_t i = 0; i < t.tree_size(); ++i) {
    const auto& kids = shape.children[i];
    if (kids.size() <= 2) continue;
    // Node i keeps kids[0]; each spine copy takes the next child and the next copy.
    int attach = static_cast<int>(i);
    for (std::size_t c = 1; c < kids.size(); ++c) {
      if (c + 1 == kids.size()) {
        out.parent[static_cast<std::size_t>(kids[c])] = attach;
        break;
      }
      const int copy = static_cast<int>(out.parent.size());
      out.parent.push_back(attach);
      out.bags.push_back(t.bags[i]);
      out.parent[static_cast<std::size_t>(kids[c])] = copy;
      attach = copy;
    }
  }
  return out;
}

}  // namespace dynreach
