#pragma once

// Brute-force reference computations. Every engine in the library is tested
// against these; they favour obviousness over speed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"
#include "dynreach/weight_assignment.hpp"

namespace dynreach::oracle {

inline constexpr std::size_t kMaxEnumerationNodes = 12;
/// Upper bound on DFS extensions performed by one exhaustive enumeration.
inline constexpr std::uint64_t kMaxEnumerationSteps = 50'000'000;

/// Irreflexive transitive closure, one BFS per source.
Relation transitive_closure(const Graph& g);

/// Representative (minimum node id) of each node's component. Undirected only.
std::vector<Node> connected_components(const Graph& g);

struct PairPaths {
  bool reachable = false;
  BigInt min_weight = 0;
  std::size_t min_count = 0;  // distinct simple paths attaining min_weight
};

struct IsolationReport {
  std::size_t n = 0;
  std::vector<PairPaths> pairs;  // row-major, index s * n + t
  bool is_isolating = false;
  bool is_strongly_isolating = false;

  const PairPaths& at(Node s, Node t) const { return pairs[s * n + t]; }
};

/// Exhaustive simple-path enumeration for every ordered pair s != t.
/// Throws PreconditionError on non-positive or missing weights, GuardExceeded
/// past kMaxEnumerationNodes nodes or kMaxEnumerationSteps DFS steps.
IsolationReport isolation_report(const Graph& g, const WeightAssignment& w);

struct Cycle {
  std::vector<Node> nodes;  // starts at its minimum node; closes back to nodes.front()
  BigInt weight = 0;
  /// Largest |w(e)| on the cycle strictly exceeds |sum of the remaining edges|.
  bool max_edge_dominates = false;
};

struct CirculationReport {
  std::vector<Cycle> cycles;
  bool has_nonzero_circulation = true;
  bool dominance_holds = true;
};

/// Every simple directed cycle on >= 3 nodes of the bidirected view of g, each
/// orientation listed once. Requires w skew-symmetric on all bidirected edges.
CirculationReport circulation_report(const Graph& g, const WeightAssignment& w);

/// Parity of the number of s->t walks of each total weight 0..b.
class WalkParityTable {
 public:
  WalkParityTable(std::size_t n, std::size_t bound);

  std::size_t node_count() const { return n_; }
  std::size_t bound() const { return bound_; }
  bool coeff(Node s, Node t, std::size_t degree) const {
    return bits_[(s * n_ + t) * (bound_ + 1) + degree] != 0;
  }
  void flip(Node s, Node t, std::size_t degree) { bits_[(s * n_ + t) * (bound_ + 1) + degree] ^= 1; }

 private:
  std::size_t n_;
  std::size_t bound_;
  std::vector<std::uint8_t> bits_;
};

inline constexpr std::size_t kMaxWalkTableCells = 64'000'000;

/// DP over (target, accumulated weight). Weights must be positive and fit 64 bits.
WalkParityTable count_weighted_walks_mod2(const Graph& g, const WeightAssignment& w, std::size_t bound);

/// Rooted spanning forest, oriented child -> parent.
struct SpanningForest {
  std::vector<std::optional<Node>> parent;
  std::vector<Node> roots;
};

/// BFS forest from the minimum node of each component; a node's parent is the
/// smallest neighbour in the previous BFS layer. Undirected only.
SpanningForest spanning_forest(const Graph& g);

}  // namespace dynreach::oracle
