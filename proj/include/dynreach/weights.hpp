#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"
#include "dynreach/tree_decomposition.hpp"
#include "dynreach/weight_assignment.hpp"

namespace dynreach {

// ---------------------------------------------------------------------------
// Non-zero circulation and isolation.

/// w'(e) = w(e) + n^(k+2) on the edges of g. Requires w skew-symmetric with
/// non-zero circulation and |w| <= n^k; the result is positive and isolating.
WeightAssignment shift_to_isolating(const Graph& g, const WeightAssignment& w, int k);

/// Skew-symmetric weights for a bounded-degree graph with a binary tree
/// decomposition. Each bidirected edge is charged to the highest bag holding
/// one of its endpoints; with beta = 2d(k+1) its weight is
/// (4 beta 3^beta + 2)^h * 3^l, h the bag height and l its 1-based rank among
/// the bag's edges, negated for edges (u, v) with u > v.
WeightAssignment btw_bounded_degree_weights(const Graph& g, const TreeDecomposition& t, std::size_t max_degree,
                                            std::size_t width);

/// Copy graph G' (one node per (node, bag) incidence) with its widened
/// decomposition, used to lift the bounded-degree construction to any
/// bounded-treewidth graph.
struct CopyGraph {
  Graph graph;                          // undirected
  TreeDecomposition decomposition;      // each bag plus its parent's copies
  TreeDecomposition source;             // binarized input decomposition
  std::vector<std::vector<int>> copy;   // copy[v][bag] = G' node or -1
  std::vector<int> highest_bag;         // B(v) in `source`
};

CopyGraph build_copy_graph(const Graph& g, const TreeDecomposition& t);

/// Directed G' edges whose weights sum to w(u, v).
std::vector<Edge> pull_back_path(const CopyGraph& copy, Node u, Node v);

/// Non-zero circulation weights for any graph with a valid tree decomposition.
WeightAssignment btw_weights(const Graph& g, const TreeDecomposition& t);

/// Sets deleted edges (both orientations) to 0; certification is kept.
WeightAssignment zero_deleted_weights(const WeightAssignment& u, const EdgeSet& eminus);

// ---------------------------------------------------------------------------
// Insertion weights.

class PrimeSearchExhausted : public std::runtime_error {
 public:
  PrimeSearchExhausted(const std::string& what, std::uint64_t largest_tried)
      : std::runtime_error(what), largest_tried_(largest_tried) {}
  std::uint64_t largest_tried() const { return largest_tried_; }

 private:
  std::uint64_t largest_tried_;
};

bool is_prime(std::uint64_t p);
std::uint64_t next_prime(std::uint64_t after);

/// Smallest prime under which the elements of `values` are pairwise distinct.
/// Fails past primes of `bit_budget` bits.
std::uint64_t find_separating_prime(std::span<const BigInt> values, unsigned bit_budget = 62);

/// Graph with real edges and weight-zero fictitious edges standing for known
/// reachability. Nodes are renumbered densely by ascending original id.
struct AdornedGraph {
  std::vector<Node> original;   // local index -> original node
  std::vector<Edge> real;       // local ids, sorted
  Relation fictitious;          // local ids

  std::size_t size() const { return original.size(); }
};

/// H on the affected nodes of eplus: real edges eplus, fictitious edges every
/// reachable pair among the affected nodes.
AdornedGraph build_adorned_graph(const EdgeSet& eplus, const Relation& reach);

inline constexpr std::size_t kMaxAdornedRealEdges = 14;

/// Real-edge sets of simple real-partial s-t paths in H, per ordered pair.
class RealPathSets {
 public:
  explicit RealPathSets(const AdornedGraph& h);

  std::size_t size() const { return n_; }
  /// Nonempty masks over h.real realizable from s to t (s != t).
  const std::vector<std::uint32_t>& elements(Node s, Node t) const { return elements_[s * n_ + t]; }

 private:
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> elements_;
};

/// True iff the weights (indexed like h.real) give every nonempty element set
/// of size <= max_real_edges a unique minimum, and minima of different pairs
/// differ unless they are the same real-edge set.
bool strongly_real_isolates(const RealPathSets& sets, std::span<const BigInt> real_weights,
                            std::size_t max_real_edges);

struct FamilyMember {
  WeightAssignment weights;
  std::vector<std::uint64_t> primes;
};

struct WeightFamily {
  std::vector<FamilyMember> members;
  std::size_t adorned_nodes = 0;
  std::size_t levels = 0;
  int beta = 0;
};

struct InsertionFamilyOptions {
  /// Passing primes kept per level; 1 yields only the greedy sequence.
  std::size_t sibling_width = 1;
  unsigned prime_bit_budget = 20;
};

class FamilyConstructionError : public std::runtime_error {
 public:
  FamilyConstructionError(const std::string& what, std::size_t level)
      : std::runtime_error(what), level_(level) {}
  std::size_t failing_level() const { return level_; }

 private:
  std::size_t level_;
};

/// Weights for g + eplus agreeing with w on g's edges. Inserted edges get
/// n^(k+2) * w_p(e), where w_p(e) = sum_j N^(beta(L-j)) (2^((N+1)u+v) mod p_j)
/// over L = ceil(log2 N) greedily chosen primes (N = |V_aff|, u, v 1-based
/// ranks in H). Prime p_i is the least making the level-i weights strongly
/// real-isolate H's real-partial paths with at most 2^i real edges.
WeightFamily insertion_weight_family(const Graph& g, const Relation& reach, const EdgeSet& eplus,
                                     const WeightAssignment& w, const InsertionFamilyOptions& options = {});

// ---------------------------------------------------------------------------
// Small random weights for desk-scale experiments.

/// Uniform weights in [1, cap] on g's edges, redrawn until the oracle certifies
/// isolation (graphs beyond the oracle's size guard are returned uncertified).
WeightAssignment random_isolating_weights(const Graph& g, std::uint64_t seed, std::uint64_t cap,
                                          std::size_t max_retries = 64);

/// `count` candidates for g, each equal to `base` on existing edges and
/// uniform in [1, cap] on eplus.
std::vector<WeightAssignment> random_insertion_candidates(const WeightAssignment& base, const EdgeSet& eplus,
                                                          std::uint64_t seed, std::uint64_t cap,
                                                          std::size_t count);

}  // namespace dynreach
