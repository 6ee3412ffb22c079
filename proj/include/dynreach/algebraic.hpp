#pragma once

// Reachability read off b-approximations of (I - A(x))^-1 over Z_2, where
// A(x) has entry x^w(u,v) for every edge. A nonzero (a, b) entry witnesses a
// walk; under isolating weights every reachable pair has an odd coefficient at
// its minimum path weight.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "dynreach/gf2_polymat.hpp"
#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"
#include "dynreach/weight_assignment.hpp"

namespace dynreach {

enum class AlgebraicMode {
  kFaithful,  // keep the whole candidate family as members
  kVerified,  // keep one member, certified isolating by the oracle
};

enum class WeightScheme {
  kCirculation,   // circulation-derived weights, prime-sequence insertion family
  kRandom,  // small uniform weights, redrawn until isolating
};

std::string to_string(AlgebraicMode mode);
std::string to_string(WeightScheme scheme);

struct AlgebraicOptions {
  AlgebraicMode mode = AlgebraicMode::kVerified;
  WeightScheme scheme = WeightScheme::kRandom;
  std::uint64_t seed = 0;
  /// Random weights are drawn from [1, weight_cap]; 0 picks max(4, 2 n^2).
  std::uint64_t weight_cap = 0;
  /// Candidates drawn per insertion batch (random scheme) and per retry.
  std::size_t candidates = 4;
  std::size_t max_retries = 32;
  /// Member cap in faithful mode.
  std::size_t max_members = 4;
  /// Prime-sequence siblings per level (circulation scheme).
  std::size_t sibling_width = 1;
  /// Largest admissible degree bound; exceeding it raises GuardExceeded.
  std::size_t max_bound = std::size_t{1} << 16;
};

struct AlgebraicMember {
  WeightAssignment weights;
  PolyMatrix c;
};

struct AlgebraicStats {
  std::size_t family_size = 0;
  std::size_t members = 0;
  std::size_t bound = 0;
  std::size_t delta_rank = 0;  // largest rank fed to one SMW update
  std::size_t reinitializations = 0;
  std::size_t rejected = 0;
};

/// b = n * wmax.
std::size_t degree_bound(std::size_t n, std::size_t wmax);

/// Sum_{i>=0} A^i truncated at `bound`, by doubling D <- D + A^(2^j) D.
/// Weights must be positive.
PolyMatrix walk_series(const Graph& g, const WeightAssignment& w, std::size_t bound);

class AlgebraicEngine {
 public:
  /// Circulation scheme: isolating weights are u shifted by n^(k+2).
  static AlgebraicEngine from_circulation(const Graph& g, const WeightAssignment& u, int k,
                                          const AlgebraicOptions& options = {});
  /// Starts from the given positive weights (certified or not).
  static AlgebraicEngine from_weights(const Graph& g, const WeightAssignment& w,
                                      const AlgebraicOptions& options = {});
  /// Random scheme with weights drawn from options.seed.
  static AlgebraicEngine from_random(const Graph& g, const AlgebraicOptions& options = {});

  /// Insertions first, then deletions; the change must be normalized.
  void apply(const BulkChange& change);
  void insert_edges(const EdgeSet& eplus);
  void delete_edges(const EdgeSet& eminus);

  bool query(Node a, Node b) const;
  /// Pairs a != b with a nonzero entry in some member.
  Relation reach_from_matrices() const;

  const Graph& graph() const { return graph_; }
  std::size_t bound() const { return bound_; }
  const AlgebraicOptions& options() const { return options_; }
  const std::vector<AlgebraicMember>& members() const { return members_; }
  /// Candidates computed but discarded by the last insertion batch.
  const std::vector<AlgebraicMember>& last_rejected() const { return rejected_; }
  const AlgebraicStats& last_stats() const { return stats_; }

  /// Per member: `member i`, its `w u v x` lines, then the matrix dump.
  void dump_state(std::ostream& out) const;

 private:
  AlgebraicEngine(Graph g, const AlgebraicOptions& options);

  EdgeSet stored_edges(const EdgeSet& edges) const;
  std::uint64_t weight_cap() const;
  std::uint64_t next_seed();
  std::size_t max_weight() const;
  void reinitialize(std::size_t bound);
  void set_single_member(const WeightAssignment& w);
  AlgebraicMember updated(const AlgebraicMember& m, const WeightAssignment& w, const EdgeSet& changed);
  bool certify(const Graph& g, const WeightAssignment& w) const;
  void insert_random(const Graph& next, const EdgeSet& plus);
  void insert_circulation(const Graph& next, const EdgeSet& plus);

  Graph graph_;
  AlgebraicOptions options_;
  WeightAssignment base_;  // circulation weights (circulation scheme)
  int base_exponent_ = 0;
  std::size_t bound_ = 0;
  std::uint64_t step_ = 0;
  std::vector<AlgebraicMember> members_;
  std::vector<AlgebraicMember> rejected_;
  AlgebraicStats stats_;
};

}  // namespace dynreach
