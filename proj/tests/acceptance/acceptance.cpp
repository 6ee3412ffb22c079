// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dynreach/algebraic.hpp"
#include "dynreach/generators.hpp"
#include "dynreach/gf2_polymat.hpp"
#include "dynreach/io.hpp"
#include "dynreach/oracle.hpp"
#include "dynreach/replay.hpp"
#include "dynreach/tc_insert.hpp"
#include "dynreach/undirected.hpp"
#include "dynreach/weights.hpp"

namespace dynreach {
namespace {

// Every criterion is exact: a single mismatch fails it.
constexpr std::size_t kTolerance = 0;

constexpr std::size_t kTcRuns = 200;
constexpr std::size_t kForestRuns = 200;
constexpr std::size_t kEngineSteps = 10;
constexpr std::size_t kSmwCases = 100;
constexpr std::size_t kSmwMaxN = 8;
constexpr std::size_t kSmwMaxBound = 64;
constexpr std::size_t kSmwMaxRank = 4;
constexpr std::size_t kBoundedDegreeInstances = 50;
constexpr std::size_t kTreewidthInstances = 50;
constexpr std::size_t kShiftInstances = 50;
constexpr std::size_t kFamilyInstances = 100;
constexpr std::size_t kFamilyMaxN = 10;
constexpr std::size_t kFamilyMaxInserted = 8;
constexpr std::size_t kAlgebraicRuns = 100;
constexpr std::size_t kAlgebraicMaxN = 10;
constexpr std::size_t kAlgebraicSteps = 6;
constexpr std::size_t kCoefficientCases = 50;
constexpr std::size_t kCoefficientMaxN = 6;
constexpr std::size_t kCoefficientMaxBound = 40;

const std::size_t kSizes[] = {8, 16, 32, 64};

struct Outcome {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

std::size_t log_squared_batch(std::size_t n) { return change_budget(n, 2.0); }

std::string where(std::uint64_t seed, std::size_t step) {
  return "seed " + std::to_string(seed) + " step " + std::to_string(step);
}

Outcome tc_insert_vs_closure() {
  Outcome out;
  for (std::size_t run = 0; run < kTcRuns; ++run) {
    const std::size_t n = kSizes[run % 4];
    const std::uint64_t seed = run;
    const Graph start = random_gnp(n, 1.0 / static_cast<double>(n), seed);
    TcInsertEngine e(n);
    const auto initial = start.edges();
    e.bulk_insert(EdgeSet(initial.begin(), initial.end()));
    Graph g = start;
    const auto script = random_change_script(start, seed, {kEngineSteps, log_squared_batch(n), 0.0});
    for (std::size_t step = 0; step < script.size(); ++step) {
      e.bulk_insert(script[step].inserted);
      g = apply_change(g, script[step]);
      out.check(e.closure() == oracle::transitive_closure(g), where(seed, step));
    }
  }
  return out;
}

Outcome forest_vs_connectivity() {
  Outcome out;
  for (std::size_t run = 0; run < kForestRuns; ++run) {
    const std::size_t n = kSizes[run % 4];
    const std::uint64_t seed = 1000 + run;
    const Graph start = random_gnp(n, 1.5 / static_cast<double>(n), seed, Directedness::kUndirected);
    ForestEngine e(n);
    const auto initial = start.canonical_edges();
    e.bulk_insert(EdgeSet(initial.begin(), initial.end()));
    const auto script = random_change_script(start, seed, {kEngineSteps, log_squared_batch(n), 0.5});
    for (std::size_t step = 0; step < script.size(); ++step) {
      e.apply(script[step]);
      const auto violation = forest_invariant_violation(e);
      out.check(!violation, where(seed, step) + (violation ? ": " + *violation : ""));
      const auto reps = oracle::connected_components(e.graph());
      bool agree = true;
      for (Node a = 0; a < n && agree; ++a) {
        for (Node b = 0; b < n; ++b) agree = agree && e.query(a, b) == (reps[a] == reps[b]);
      }
      out.check(agree, where(seed, step) + ": connectivity");
    }
  }
  return out;
}

TruncatedPoly random_poly_without_constant(std::size_t bound, std::mt19937_64& rng) {
  TruncatedPoly p(bound);
  for (std::size_t d = 1; d <= bound; ++d) p.set(d, rng() % 4 == 0);
  return p;
}

Outcome smw_vs_direct_inverse() {
  Outcome out;
  std::mt19937_64 rng(2024);
  for (std::size_t c = 0; c < kSmwCases; ++c) {
    const std::size_t n = 2 + rng() % (kSmwMaxN - 1);
    const std::size_t bound = 1 + rng() % kSmwMaxBound;
    // I - A with A's entries free of constant terms; over Z_2 minus is plus.
    PolyMatrix m = PolyMatrix::identity(n, bound);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (rng() % 3 == 0) m.at(i, j) += random_poly_without_constant(bound, rng);
      }
    }
    const PolyMatrix inverse = mat_inverse_local(m);
    std::vector<DeltaEntry> entries;
    std::set<std::size_t> rows;
    std::set<std::size_t> cols;
    const std::size_t wanted = 1 + rng() % 3;
    while (entries.size() < wanted) {
      const std::size_t r = rng() % n;
      const std::size_t col = rng() % n;
      std::set<std::size_t> r2 = rows;
      std::set<std::size_t> c2 = cols;
      r2.insert(r);
      c2.insert(col);
      if (r2.size() + c2.size() > kSmwMaxRank) break;
      rows = r2;
      cols = c2;
      entries.push_back({r, col, random_poly_without_constant(bound, rng)});
    }
    const UBVDecomposition d = decompose_delta(n, bound, entries);
    out.check(d.rank() <= kSmwMaxRank, "case " + std::to_string(c) + ": rank");
    PolyMatrix changed = m;
    for (const DeltaEntry& e : entries) changed.at(e.row, e.col) += e.value;
    out.check(smw_update(inverse, d) == mat_inverse_local(changed), "case " + std::to_string(c));
  }
  return out;
}

Outcome bounded_degree_circulation() {
  Outcome out;
  for (std::size_t i = 0; i < kBoundedDegreeInstances; ++i) {
    const std::uint64_t seed = 3000 + i;
    const std::size_t k = 1 + i % 2;
    const std::size_t n = 6 + i % 7;
    const std::size_t d = 3;
    const GeneratedInstance inst =
        partial_k_tree(n, k, seed, {0.7, d, Directedness::kUndirected});
    const TreeDecomposition t = binarize_decomposition(inst.decomposition);
    const WeightAssignment w = btw_bounded_degree_weights(inst.graph, t, d, k);
    const auto r = oracle::circulation_report(inst.graph, w);
    const std::string tag = "seed " + std::to_string(seed);
    out.check(w.check_skew_symmetry(), tag + ": skew");
    out.check(r.has_nonzero_circulation, tag + ": zero-weight cycle");
    out.check(r.dominance_holds, tag + ": dominance");
  }
  return out;
}

Outcome treewidth_circulation() {
  Outcome out;
  for (std::size_t i = 0; i < kTreewidthInstances; ++i) {
    const std::uint64_t seed = 4000 + i;
    const std::size_t n = 6 + i % 7;
    const GeneratedInstance inst = partial_k_tree(n, 2, seed, {0.8, 0, Directedness::kUndirected});
    const WeightAssignment w = btw_weights(inst.graph, inst.decomposition);
    const std::string tag = "seed " + std::to_string(seed);
    out.check(w.check_skew_symmetry(), tag + ": skew");
    out.check(oracle::circulation_report(inst.graph, w).has_nonzero_circulation, tag + ": zero-weight cycle");
  }
  return out;
}

Outcome shift_isolates() {
  Outcome out;
  for (std::size_t i = 0; i < kShiftInstances; ++i) {
    const std::uint64_t seed = 5000 + i;
    const std::size_t n = 5 + i % 6;
    const bool bounded_degree = i % 2 == 0;
    const GeneratedInstance inst =
        partial_k_tree(n, 2, seed, {0.7, bounded_degree ? std::size_t{3} : 0, Directedness::kUndirected});
    const WeightAssignment u = bounded_degree
                                   ? btw_bounded_degree_weights(inst.graph,
                                                                binarize_decomposition(inst.decomposition), 3, 2)
                                   : btw_weights(inst.graph, inst.decomposition);
    const int k = bound_exponent_for(u, n);
    const std::string tag = "seed " + std::to_string(seed);
    // The full bidirected graph, and a random orientation subset of it.
    const Graph both = inst.graph.bidirected();
    out.check(oracle::isolation_report(both, shift_to_isolating(both, u, k)).is_isolating, tag + ": bidirected");
    std::mt19937_64 rng(seed);
    Graph sub(n);
    for (Edge e : both.edges()) {
      if (rng() % 2 == 0) sub.add_edge(e.from, e.to);
    }
    out.check(oracle::isolation_report(sub, shift_to_isolating(sub, u, k)).is_isolating, tag + ": subgraph");
  }
  return out;
}

bool separating_prime_verified(const std::vector<BigInt>& values) {
  const std::uint64_t p = find_separating_prime(values);
  auto separates = [&](std::uint64_t q) {
    std::set<BigInt> residues;
    for (const BigInt& v : values) residues.insert(v % q);
    return residues.size() == values.size();
  };
  if (!is_prime(p) || !separates(p)) return false;
  for (std::uint64_t q = 2; q < p; q = next_prime(q)) {
    if (separates(q)) return false;
  }
  return true;
}

Outcome insertion_family() {
  Outcome out;
  for (std::size_t i = 0; i < kFamilyInstances; ++i) {
    const std::uint64_t seed = 6000 + i;
    const std::size_t n = 5 + i % (kFamilyMaxN - 4);
    const GeneratedInstance inst = partial_k_tree(n, 2, seed, {0.5, 0, Directedness::kDirected});
    const Graph& g = inst.graph;
    const WeightAssignment u = btw_weights(g.bidirected(), inst.decomposition);
    const WeightAssignment w = shift_to_isolating(g, u, bound_exponent_for(u, n));
    const BulkChange c = random_change_script(g, seed, {1, kFamilyMaxInserted, 0.0}).front();
    const std::string tag = "seed " + std::to_string(seed);
    InsertionFamilyOptions options;
    options.sibling_width = 2;
    WeightFamily family;
    try {
      family = insertion_weight_family(g, oracle::transitive_closure(g), c.inserted, w, options);
    } catch (const std::exception& e) {
      out.check(false, tag + ": " + e.what());
      continue;
    }
    const Graph next = apply_change(g, c);
    bool some_isolating = false;
    bool agree = true;
    std::set<BigInt> minima;
    for (const FamilyMember& m : family.members) {
      for (Edge e : g.edges()) agree = agree && m.weights.at(e) == w.at(e);
      const auto r = oracle::isolation_report(next, m.weights);
      if (r.is_isolating && !some_isolating) {
        for (const oracle::PairPaths& p : r.pairs) {
          if (p.reachable && p.min_weight > 0) minima.insert(p.min_weight);
        }
      }
      some_isolating = some_isolating || r.is_isolating;
    }
    out.check(some_isolating, tag + ": no isolating member");
    out.check(agree, tag + ": members differ on surviving edges");
    if (minima.size() >= 2) {
      out.check(separating_prime_verified(std::vector<BigInt>(minima.begin(), minima.end())),
                tag + ": separating prime");
    }
  }
  return out;
}

bool sound(const AlgebraicMember& m, const Relation& truth) {
  const std::size_t n = m.c.rows();
  for (Node a = 0; a < n; ++a) {
    for (Node b = 0; b < n; ++b) {
      if (a != b && !m.c.at(a, b).is_zero() && !truth.contains(a, b)) return false;
    }
  }
  return true;
}

Outcome algebraic_end_to_end() {
  Outcome out;
  for (std::size_t run = 0; run < kAlgebraicRuns; ++run) {
    const std::uint64_t seed = 7000 + run;
    const std::size_t n = 4 + run % (kAlgebraicMaxN - 3);
    const GeneratedInstance inst = partial_k_tree(n, 2, seed, {0.5, 0, Directedness::kDirected});
    AlgebraicOptions options;
    options.seed = seed;
    AlgebraicEngine e = AlgebraicEngine::from_random(inst.graph, options);
    const auto script = random_change_script(inst.graph, seed, {kAlgebraicSteps, 4, 0.4});
    for (std::size_t step = 0; step < script.size(); ++step) {
      // Rejected candidates describe the graph right after the insertions.
      e.insert_edges(script[step].inserted);
      const Relation inserted_truth = oracle::transitive_closure(e.graph());
      for (const AlgebraicMember& m : e.last_rejected()) {
        out.check(sound(m, inserted_truth), where(seed, step) + ": rejected candidate");
      }
      e.delete_edges(script[step].deleted);
      const Relation truth = oracle::transitive_closure(e.graph());
      bool agree = true;
      for (Node a = 0; a < n; ++a) {
        for (Node b = 0; b < n; ++b) agree = agree && e.query(a, b) == (a == b || truth.contains(a, b));
      }
      out.check(agree, where(seed, step) + ": queries");
      for (const AlgebraicMember& m : e.members()) out.check(sound(m, truth), where(seed, step) + ": member");
    }
  }
  return out;
}

bool matches_walk_table(const PolyMatrix& c, const Graph& g, const WeightAssignment& w) {
  const auto table = oracle::count_weighted_walks_mod2(g, w, c.bound());
  for (Node s = 0; s < g.node_count(); ++s) {
    for (Node t = 0; t < g.node_count(); ++t) {
      for (std::size_t i = 0; i <= c.bound(); ++i) {
        if (c.at(s, t).coeff(i) != table.coeff(s, t, i)) return false;
      }
    }
  }
  return true;
}

Outcome coefficient_semantics() {
  Outcome out;
  for (std::size_t i = 0; i < kCoefficientCases; ++i) {
    const std::uint64_t seed = 8000 + i;
    const std::size_t n = 2 + i % (kCoefficientMaxN - 1);
    const std::size_t wmax = kCoefficientMaxBound / n;
    const Graph g = random_gnp(n, 0.4, seed);
    std::mt19937_64 rng(seed);
    WeightAssignment w;
    for (Edge e : g.edges()) w.set(e, 1 + rng() % wmax);
    // Faithful mode: the weights need not isolate, so nothing gets redrawn.
    AlgebraicOptions options;
    options.mode = AlgebraicMode::kFaithful;
    options.seed = seed;
    options.weight_cap = wmax;
    AlgebraicEngine e = AlgebraicEngine::from_weights(g, w, options);
    out.check(e.bound() <= kCoefficientMaxBound, "seed " + std::to_string(seed) + ": bound");
    out.check(matches_walk_table(e.members().front().c, g, w), "seed " + std::to_string(seed) + ": init");
    const auto script = random_change_script(g, seed, {4, 3, 0.5});
    for (std::size_t step = 0; step < script.size(); ++step) {
      e.apply(script[step]);
      for (const AlgebraicMember& m : e.members()) {
        out.check(m.c == walk_series(e.graph(), m.weights, e.bound()), where(seed, step) + ": from scratch");
        out.check(matches_walk_table(m.c, e.graph(), m.weights), where(seed, step) + ": walk parity");
      }
    }
  }
  return out;
}

std::string determinism_transcript() {
  std::ostringstream out;
  write_graph(out, random_gnp(24, 0.1, 11));
  write_graph(out, random_gnp(16, 0.2, 12, Directedness::kUndirected));
  write_graph(out, path_union(4, 5, 13));
  const GeneratedInstance inst = partial_k_tree(12, 2, 14);
  write_graph(out, inst.graph);
  write_decomposition(out, inst.decomposition);
  write_weights(out, btw_weights(inst.graph, inst.decomposition), true);
  write_weights(out, random_isolating_weights(random_gnp(8, 0.3, 15), 15, 64));

  const Graph directed = random_gnp(12, 0.1, 16);
  const Graph undirected = random_gnp(12, 0.1, 17, Directedness::kUndirected);
  const auto insert_script = random_change_script(directed, 16, {6, 4, 0.0});
  const auto mixed_directed = random_change_script(directed, 18, {6, 4, 0.4});
  const auto mixed_undirected = random_change_script(undirected, 17, {6, 4, 0.4});
  write_change_script(out, mixed_directed);
  ReplayOptions options;
  options.oracle_check = true;
  options.timing = false;
  options.budget_c = 2.0;
  options.engine = EngineKind::kTcInsert;
  write_report(out, replay(directed, insert_script, options));
  options.engine = EngineKind::kUndirected;
  write_report(out, replay(undirected, mixed_undirected, options));
  options.engine = EngineKind::kAlgebraic;
  options.seed = 19;
  write_report(out, replay(directed, mixed_directed, options));

  AlgebraicOptions faithful;
  faithful.mode = AlgebraicMode::kFaithful;
  faithful.seed = 20;
  AlgebraicEngine e = AlgebraicEngine::from_random(directed, faithful);
  for (const BulkChange& c : mixed_directed) e.apply(c);
  e.dump_state(out);
  ForestEngine forest(12);
  const auto initial = undirected.canonical_edges();
  forest.bulk_insert(EdgeSet(initial.begin(), initial.end()));
  for (const BulkChange& c : mixed_undirected) forest.apply(c);
  for (const auto& p : forest.parents()) out << (p ? static_cast<long>(*p) : -1L) << ' ';
  return out.str();
}

Outcome determinism() {
  Outcome out;
  const std::string first = determinism_transcript();
  const std::string second = determinism_transcript();
  out.check(!first.empty() && first == second, "transcripts differ");
  return out;
}

}  // namespace
}  // namespace dynreach

int main() {
  using namespace dynreach;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "tc-insert engine matches BFS closure", tc_insert_vs_closure},
      {2, "undirected engine matches connectivity, forest invariants hold", forest_vs_connectivity},
      {3, "SMW update equals direct local inverse", smw_vs_direct_inverse},
      {4, "bounded-degree weights: skew, nonzero circulation, dominance", bounded_degree_circulation},
      {5, "treewidth pull-back weights have nonzero circulation", treewidth_circulation},
      {6, "shifted weights are isolating", shift_isolates},
      {7, "insertion family has an isolating member", insertion_family},
      {8, "algebraic engine matches BFS oracle and stays sound", algebraic_end_to_end},
      {9, "matrix coefficients equal walk parities", coefficient_semantics},
      {10, "engines and generators are deterministic", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.failures <= kTolerance;
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s (%zu checks, %zu failures, %.1fs)%s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.checks, o.failures, seconds, o.failures ? " first: " : "", o.first_failure.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
