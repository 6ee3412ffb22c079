#include "dynreach/algebraic.hpp"

#include <algorithm>
#include <random>

#include "dynreach/oracle.hpp"
#include "dynreach/weights.hpp"

namespace dynreach {

std::string to_string(AlgebraicMode mode) {
  return mode == AlgebraicMode::kFaithful ? "faithful" : "verified";
}

std::string to_string(WeightScheme scheme) { return scheme == WeightScheme::kCirculation ? "paper" : "random"; }

std::size_t degree_bound(std::size_t n, std::size_t wmax) {
  if (wmax < 1) throw PreconditionError("maximum weight must be at least 1");
  return n * wmax;
}

namespace {

std::size_t small_weight(const BigInt& w, std::size_t limit) {
  if (w <= 0) throw PreconditionError("algebraic weights must be positive");
  if (w > limit) throw GuardExceeded("weight " + w.str() + " exceeds the degree bound limit");
  return w.convert_to<std::size_t>();
}

}  // namespace

PolyMatrix walk_series(const Graph& g, const WeightAssignment& w, std::size_t bound) {
  const std::size_t n = g.node_count();
  PolyMatrix a(n, n, bound);
  std::size_t min_weight = 0;
  for (Edge e : g.edges()) {
    const BigInt& value = w.at(e);
    if (value <= 0) throw PreconditionError("weight of " + to_string(e) + " is not positive");
    if (value > bound) continue;
    const auto d = value.convert_to<std::size_t>();
    a.at(e.from, e.to) = TruncatedPoly::monomial(bound, d);
    min_weight = min_weight == 0 ? d : std::min(min_weight, d);
  }
  PolyMatrix d = PolyMatrix::identity(n, bound);
  if (min_weight == 0) return d;
  // d = A^0 + ... + A^(reach-1), power = A^reach.
  PolyMatrix power = a;
  for (std::size_t reach = 1; reach * min_weight <= bound; reach *= 2) {
    d = mat_add(d, mat_mul(power, d));
    if (2 * reach * min_weight <= bound) power = mat_mul(power, power);
  }
  return d;
}

AlgebraicEngine::AlgebraicEngine(Graph g, const AlgebraicOptions& options)
    : graph_(std::move(g)), options_(options) {
  if (graph_.node_count() == 0) throw PreconditionError("domain must be non-empty");
}

AlgebraicEngine AlgebraicEngine::from_circulation(const Graph& g, const WeightAssignment& u, int k,
                                                  const AlgebraicOptions& options) {
  if (u.certification != Certification::kNonzeroCirculation) {
    throw PreconditionError("base weights are not certified non-zero circulation");
  }
  AlgebraicEngine engine(g, options);
  engine.options_.scheme = WeightScheme::kCirculation;
  engine.base_ = u;
  engine.base_exponent_ = k;
  engine.set_single_member(shift_to_isolating(g, u, k));
  return engine;
}

AlgebraicEngine AlgebraicEngine::from_weights(const Graph& g, const WeightAssignment& w,
                                              const AlgebraicOptions& options) {
  AlgebraicEngine engine(g, options);
  engine.set_single_member(w);
  return engine;
}

AlgebraicEngine AlgebraicEngine::from_random(const Graph& g, const AlgebraicOptions& options) {
  AlgebraicEngine engine(g, options);
  engine.options_.scheme = WeightScheme::kRandom;
  engine.set_single_member(
      random_isolating_weights(g, engine.next_seed(), engine.weight_cap(), options.max_retries));
  return engine;
}

std::uint64_t AlgebraicEngine::weight_cap() const {
  if (options_.weight_cap != 0) return options_.weight_cap;
  const std::uint64_t n = graph_.node_count();
  return std::max<std::uint64_t>(4, 2 * n * n);
}

std::uint64_t AlgebraicEngine::next_seed() {
  // splitmix64 over (seed, step) keeps every batch's draws independent of the others.
  std::uint64_t z = options_.seed + 0x9E3779B97F4A7C15ULL * ++step_;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

std::size_t AlgebraicEngine::max_weight() const {
  std::size_t wmax = 1;
  for (const AlgebraicMember& m : members_) {
    for (const auto& [e, value] : m.weights.weights) {
      wmax = std::max(wmax, small_weight(value, options_.max_bound));
    }
  }
  return wmax;
}

void AlgebraicEngine::reinitialize(std::size_t bound) {
  if (bound > options_.max_bound) {
    throw GuardExceeded("degree bound " + std::to_string(bound) + " exceeds limit " +
                        std::to_string(options_.max_bound));
  }
  bound_ = bound;
  for (AlgebraicMember& m : members_) m.c = walk_series(graph_, m.weights, bound_);
}

void AlgebraicEngine::set_single_member(const WeightAssignment& w) {
  AlgebraicMember m;
  for (Edge e : graph_.edges()) m.weights.set(e, w.at(e));
  m.weights.certification = w.certification;
  if (m.weights.certification != Certification::kIsolating && certify(graph_, m.weights)) {
    m.weights.certification = Certification::kIsolating;
  }
  members_ = {std::move(m)};
  reinitialize(degree_bound(graph_.node_count(), max_weight()));
  ++stats_.reinitializations;
}

EdgeSet AlgebraicEngine::stored_edges(const EdgeSet& edges) const {
  EdgeSet out;
  for (Edge e : edges) {
    out.insert(e);
    if (!graph_.directed()) out.insert(e.reversed());
  }
  return out;
}

bool AlgebraicEngine::certify(const Graph& g, const WeightAssignment& w) const {
  if (g.node_count() > oracle::kMaxEnumerationNodes) return false;
  try {
    return oracle::isolation_report(g, w).is_isolating;
  } catch (const GuardExceeded&) {
    return false;
  }
}

AlgebraicMember AlgebraicEngine::updated(const AlgebraicMember& m, const WeightAssignment& w,
                                         const EdgeSet& changed) {
  if (!m.c.constant_term_is_identity()) throw std::logic_error("member matrix lost its unit constant term");
  std::vector<DeltaEntry> entries;
  for (Edge e : changed) {
    const std::size_t d = small_weight(w.at(e), options_.max_bound);
    entries.push_back({e.from, e.to, TruncatedPoly::monomial(bound_, d)});
  }
  const UBVDecomposition delta = decompose_delta(graph_.node_count(), bound_, entries);
  stats_.delta_rank = std::max(stats_.delta_rank, delta.rank());
  return {w, smw_update(m.c, delta)};
}

void AlgebraicEngine::apply(const BulkChange& change) {
  insert_edges(change.inserted);
  const AlgebraicStats inserted = stats_;
  delete_edges(change.deleted);
  stats_.family_size = inserted.family_size;
  stats_.rejected = inserted.rejected;
  stats_.delta_rank = std::max(stats_.delta_rank, inserted.delta_rank);
  stats_.reinitializations += inserted.reinitializations;
}

void AlgebraicEngine::delete_edges(const EdgeSet& eminus) {
  const EdgeSet minus = stored_edges(eminus);
  for (Edge e : minus) {
    if (!graph_.has_edge(e)) throw PreconditionError("deleting absent edge " + to_string(e));
  }
  stats_ = {};
  stats_.bound = bound_;
  stats_.members = members_.size();
  if (minus.empty()) return;

  // Over Z_2 removing x^w(e) from A is adding it again.
  for (AlgebraicMember& m : members_) {
    AlgebraicMember next = updated(m, m.weights, minus);
    for (Edge e : minus) next.weights.weights.erase(e);
    next.weights.certification = m.weights.certification;
    m = std::move(next);
  }
  for (Edge e : eminus) graph_.remove_edge(e.from, e.to);
  if (options_.scheme == WeightScheme::kCirculation) base_ = zero_deleted_weights(base_, eminus);

  // Restriction can create ties among the surviving paths.
  if (options_.mode == AlgebraicMode::kVerified && graph_.node_count() <= oracle::kMaxEnumerationNodes &&
      !certify(graph_, members_.front().weights)) {
    members_ = {};
    set_single_member(
        random_isolating_weights(graph_, next_seed(), weight_cap(), options_.max_retries));
  }
  stats_.members = members_.size();
  stats_.bound = bound_;
}

void AlgebraicEngine::insert_edges(const EdgeSet& eplus) {
  const EdgeSet plus = stored_edges(eplus);
  for (Edge e : plus) {
    graph_.check_node(e.from);
    graph_.check_node(e.to);
    if (e.from == e.to) throw PreconditionError("self-loop " + to_string(e));
    if (graph_.has_edge(e)) throw PreconditionError("inserting present edge " + to_string(e));
  }
  stats_ = {};
  rejected_.clear();
  if (plus.empty()) {
    stats_.members = members_.size();
    stats_.bound = bound_;
    return;
  }
  Graph next = graph_;
  for (Edge e : eplus) next.add_edge(e.from, e.to);

  if (options_.scheme == WeightScheme::kCirculation) {
    insert_circulation(next, plus);
  } else {
    insert_random(next, plus);
  }
  stats_.members = members_.size();
  stats_.rejected = rejected_.size();
  stats_.bound = bound_;
}

void AlgebraicEngine::insert_random(const Graph& next, const EdgeSet& plus) {
  // New weights go up to the cap; widen the truncation before updating.
  const std::size_t needed = degree_bound(next.node_count(), std::max<std::size_t>(max_weight(), weight_cap()));
  if (needed > bound_) {
    reinitialize(needed);
    ++stats_.reinitializations;
  }
  const AlgebraicMember& source = members_.front();
  const bool verified = options_.mode == AlgebraicMode::kVerified;
  std::vector<AlgebraicMember> kept;
  for (std::size_t attempt = 0; attempt < options_.max_retries && kept.empty(); ++attempt) {
    const std::vector<WeightAssignment> candidates =
        random_insertion_candidates(source.weights, plus, next_seed(), weight_cap(), options_.candidates);
    stats_.family_size += candidates.size();
    for (const WeightAssignment& w : candidates) {
      AlgebraicMember m = updated(source, w, plus);
      if (!verified) {
        if (kept.size() < options_.max_members) kept.push_back(std::move(m));
        continue;
      }
      const bool checkable = next.node_count() <= oracle::kMaxEnumerationNodes;
      if (!checkable || certify(next, w)) {
        if (checkable) m.weights.certification = Certification::kIsolating;
        kept.push_back(std::move(m));
        break;
      }
      rejected_.push_back(std::move(m));
    }
  }
  if (kept.empty()) throw std::runtime_error("no isolating insertion candidate within the retry budget");
  members_ = std::move(kept);
  graph_ = next;
}

void AlgebraicEngine::insert_circulation(const Graph& next, const EdgeSet& plus) {
  const AlgebraicMember& source = members_.front();
  InsertionFamilyOptions family_options;
  family_options.sibling_width = options_.sibling_width;
  const WeightFamily family =
      insertion_weight_family(graph_, reach_from_matrices(), plus, source.weights, family_options);
  stats_.family_size = family.members.size();

  std::size_t wmax = 1;
  for (const FamilyMember& f : family.members) {
    for (Edge e : plus) {
      const BigInt& value = f.weights.at(e);
      if (value > options_.max_bound) {
        throw GuardExceeded("insertion weight " + value.str() + " exceeds the degree bound limit");
      }
      wmax = std::max(wmax, value.convert_to<std::size_t>());
    }
  }
  const std::size_t needed = degree_bound(next.node_count(), std::max(wmax, max_weight()));
  const bool regrow = needed > bound_;
  if (regrow && needed > options_.max_bound) {
    throw GuardExceeded("degree bound " + std::to_string(needed) + " exceeds limit " +
                        std::to_string(options_.max_bound));
  }

  const bool verified = options_.mode == AlgebraicMode::kVerified;
  std::vector<AlgebraicMember> candidates;
  for (const FamilyMember& f : family.members) {
    if (regrow) {
      candidates.push_back({f.weights, PolyMatrix()});
    } else {
      candidates.push_back(updated(source, f.weights, plus));
    }
  }
  std::vector<AlgebraicMember> kept;
  for (AlgebraicMember& m : candidates) {
    if (!verified) {
      if (kept.size() < options_.max_members) kept.push_back(std::move(m));
      continue;
    }
    if (kept.empty() && certify(next, m.weights)) {
      m.weights.certification = Certification::kIsolating;
      kept.push_back(std::move(m));
    } else {
      rejected_.push_back(std::move(m));
    }
  }
  if (kept.empty()) throw std::runtime_error("no member of the insertion family is isolating");
  members_ = std::move(kept);
  graph_ = next;
  if (regrow) {
    reinitialize(needed);
    for (AlgebraicMember& m : rejected_) m.c = walk_series(graph_, m.weights, bound_);
    ++stats_.reinitializations;
  }
}

bool AlgebraicEngine::query(Node a, Node b) const {
  graph_.check_node(a);
  graph_.check_node(b);
  if (a == b) return true;
  return std::any_of(members_.begin(), members_.end(),
                     [&](const AlgebraicMember& m) { return !m.c.at(a, b).is_zero(); });
}

Relation AlgebraicEngine::reach_from_matrices() const {
  const std::size_t n = graph_.node_count();
  Relation out(n);
  for (const AlgebraicMember& m : members_) {
    for (Node a = 0; a < n; ++a) {
      for (Node b = 0; b < n; ++b) {
        if (a != b && !m.c.at(a, b).is_zero()) out.insert(a, b);
      }
    }
  }
  return out;
}

void AlgebraicEngine::dump_state(std::ostream& out) const {
  out << "bound " << bound_ << '\n';
  for (std::size_t i = 0; i < members_.size(); ++i) {
    out << "member " << i << '\n';
    for (const auto& [e, value] : members_[i].weights.weights) {
      out << "w " << e.from << ' ' << e.to << ' ' << value << '\n';
    }
    dump(out, members_[i].c);
  }
}

}  // namespace dynreach
