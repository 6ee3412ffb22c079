#include "dynreach/weights.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>

#include "dynreach/oracle.hpp"

namespace dynreach {

WeightAssignment shift_to_isolating(const Graph& g, const WeightAssignment& w, int k) {
  if (!w.skew_symmetric || w.certification != Certification::kNonzeroCirculation) {
    throw PreconditionError("shift_to_isolating needs skew-symmetric non-zero circulation weights");
  }
  const std::size_t n = g.node_count();
  if (k < 0 || w.max_abs() > int_pow(n, k)) throw PreconditionError("weights exceed the stated bound n^k");
  const BigInt offset = int_pow(n, k + 2);

  WeightAssignment out;
  for (Edge e : g.edges()) out.set(e, w.at(e) + offset);
  out.skew_symmetric = false;
  out.bound_exponent = k + 3;
  out.certification = Certification::kIsolating;
  return out;
}

WeightAssignment btw_bounded_degree_weights(const Graph& g, const TreeDecomposition& t, std::size_t max_degree,
                                            std::size_t width) {
  const DecompositionReport report = validate_tree_decomposition(g, t);
  if (!report.valid()) throw PreconditionError("invalid tree decomposition: " + report.issues.front().detail);
  if (!report.binary) throw PreconditionError("tree decomposition is not binary");
  if (g.max_degree() > max_degree) throw PreconditionError("graph degree exceeds the stated bound");
  if (report.width > static_cast<int>(width)) throw PreconditionError("decomposition width exceeds the stated bound");

  const TreeShape shape = analyze_shape(t);
  const std::vector<std::optional<int>> top = highest_bags(t, shape, g.node_count());

  const std::size_t beta = 2 * max_degree * (width + 1);
  const BigInt base = 4 * BigInt(beta) * int_pow(3, static_cast<int>(beta)) + 2;

  // S(B): bidirected edges charged to bag B, in lexicographic order.
  std::map<int, std::vector<Edge>> charged;
  for (Edge e : g.bidirected().edges()) {
    const int bu = *top[e.from];
    const int bv = *top[e.to];
    const auto hu = shape.height[static_cast<std::size_t>(bu)];
    const auto hv = shape.height[static_cast<std::size_t>(bv)];
    charged[hu >= hv ? bu : bv].push_back(e);
  }

  WeightAssignment w;
  w.skew_symmetric = true;
  for (const auto& [bag, edges] : charged) {
    const int h = shape.height[static_cast<std::size_t>(bag)];
    const BigInt scale = pow(base, static_cast<unsigned>(h));
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge e = edges[i];
      if (e.from < e.to) w.set_skew(e, scale * int_pow(3, static_cast<int>(i + 1)));
    }
  }
  w.certification = Certification::kNonzeroCirculation;
  if (g.node_count() >= 2) w.bound_exponent = bound_exponent_for(w, g.node_count());
  return w;
}

CopyGraph build_copy_graph(const Graph& g, const TreeDecomposition& t) {
  const DecompositionReport report = validate_tree_decomposition(g, t);
  if (!report.valid()) throw PreconditionError("invalid tree decomposition: " + report.issues.front().detail);

  CopyGraph out;
  out.source = binarize_decomposition(t);
  const TreeDecomposition& src = out.source;
  const TreeShape shape = analyze_shape(src);
  const std::size_t n = g.node_count();
  const std::size_t m = src.tree_size();

  out.copy.assign(n, std::vector<int>(m, -1));
  int next_id = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (Node v : src.bags[i]) out.copy[v][i] = next_id++;
  }
  const std::vector<std::optional<int>> top = highest_bags(src, shape, n);
  out.highest_bag.resize(n);
  for (Node v = 0; v < n; ++v) out.highest_bag[v] = *top[v];

  out.graph = Graph(static_cast<std::size_t>(next_id), Directedness::kUndirected);
  for (std::size_t i = 0; i < m; ++i) {
    const int p = src.parent[i];
    if (p == -1) continue;
    for (Node v : src.bags[i]) {
      const int up = out.copy[v][static_cast<std::size_t>(p)];
      if (up != -1) out.graph.add_edge(static_cast<Node>(out.copy[v][i]), static_cast<Node>(up));
    }
  }
  for (Edge e : g.bidirected().edges()) {
    if (e.from > e.to) continue;
    // Highest bag holding both endpoints.
    int best = -1;
    for (std::size_t i = 0; i < m; ++i) {
      if (out.copy[e.from][i] != -1 && out.copy[e.to][i] != -1 &&
          (best == -1 || shape.height[i] > shape.height[static_cast<std::size_t>(best)])) {
        best = static_cast<int>(i);
      }
    }
    const auto bi = static_cast<std::size_t>(best);
    out.graph.add_edge(static_cast<Node>(out.copy[e.from][bi]), static_cast<Node>(out.copy[e.to][bi]));
  }

  out.decomposition.parent = src.parent;
  out.decomposition.bags.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Node> bag;
    for (Node v : src.bags[i]) bag.push_back(static_cast<Node>(out.copy[v][i]));
    if (const int p = src.parent[i]; p != -1) {
      for (Node v : src.bags[static_cast<std::size_t>(p)]) {
        bag.push_back(static_cast<Node>(out.copy[v][static_cast<std::size_t>(p)]));
      }
    }
    std::sort(bag.begin(), bag.end());
    out.decomposition.bags[i] = std::move(bag);
  }
  return out;
}

std::vector<Edge> pull_back_path(const CopyGraph& copy, Node u, Node v) {
  const int bu = copy.highest_bag.at(u);
  const int bv = copy.highest_bag.at(v);
  auto node = [&](Node x, int bag) { return static_cast<Node>(copy.copy[x][static_cast<std::size_t>(bag)]); };
  // Bags strictly above `from` up to and including `to`.
  auto chain = [&](int from, int to) {
    std::vector<int> bags{from};
    while (bags.back() != to) {
      const int p = copy.source.parent[static_cast<std::size_t>(bags.back())];
      if (p == -1) throw PreconditionError("highest bags are not on one root path");
      bags.push_back(p);
    }
    return bags;
  };

  std::vector<Edge> path;
  if (bu == bv) {
    path.push_back({node(u, bu), node(v, bv)});
    return path;
  }
  auto is_ancestor = [&](int anc, int of) {
    for (int cur = of; cur != -1; cur = copy.source.parent[static_cast<std::size_t>(cur)]) {
      if (cur == anc) return true;
    }
    return false;
  };
  if (is_ancestor(bv, bu)) {
    // B(u) below B(v): cross inside B(u), then climb v's copies up to B(v).
    const std::vector<int> bags = chain(bu, bv);
    path.push_back({node(u, bu), node(v, bu)});
    for (std::size_t i = 0; i + 1 < bags.size(); ++i) path.push_back({node(v, bags[i]), node(v, bags[i + 1])});
  } else {
    // B(v) below B(u): descend u's copies from B(u) to B(v), then cross.
    const std::vector<int> bags = chain(bv, bu);
    for (std::size_t i = bags.size() - 1; i > 0; --i) path.push_back({node(u, bags[i]), node(u, bags[i - 1])});
    path.push_back({node(u, bv), node(v, bv)});
  }
  return path;
}

WeightAssignment btw_weights(const Graph& g, const TreeDecomposition& t) {
  const CopyGraph copy = build_copy_graph(g, t);
  const std::size_t copy_width = static_cast<std::size_t>(std::max(0, analyze_shape(copy.decomposition).width));
  const WeightAssignment inner =
      btw_bounded_degree_weights(copy.graph, copy.decomposition, copy.graph.max_degree(), copy_width);

  WeightAssignment w;
  w.skew_symmetric = true;
  for (Edge e : g.bidirected().edges()) {
    BigInt total = 0;
    for (Edge step : pull_back_path(copy, e.from, e.to)) total += inner.at(step);
    w.set(e, total);
  }
  w.certification = Certification::kNonzeroCirculation;
  if (g.node_count() >= 2) w.bound_exponent = bound_exponent_for(w, g.node_count());
  return w;
}

WeightAssignment zero_deleted_weights(const WeightAssignment& u, const EdgeSet& eminus) {
  WeightAssignment out = u;
  for (Edge e : eminus) {
    if (out.contains(e)) out.set(e, 0);
    if (out.contains(e.reversed())) out.set(e.reversed(), 0);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

unsigned bit_length(std::uint64_t x) { return static_cast<unsigned>(std::bit_width(x)); }

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (p % small == 0) return p == small;
  }
  // Deterministic Miller-Rabin bases for 64-bit integers.
  std::uint64_t d = p - 1;
  unsigned r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, p);
    if (x == 1 || x == p - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = mul_mod(x, x, p);
      if (x == p - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t after) {
  std::uint64_t p = after + 1;
  while (!is_prime(p)) ++p;
  return p;
}

std::uint64_t find_separating_prime(std::span<const BigInt> values, unsigned bit_budget) {
  if (values.size() < 2) throw PreconditionError("separating prime needs at least two values");
  for (const BigInt& x : values) {
    if (x < 0) throw PreconditionError("separating prime expects non-negative values");
  }
  std::uint64_t largest = 0;
  for (std::uint64_t p = 2; bit_length(p) <= bit_budget; p = next_prime(p)) {
    largest = p;
    std::set<std::uint64_t> residues;
    bool separated = true;
    for (const BigInt& x : values) {
      if (!residues.insert(static_cast<std::uint64_t>(x % p)).second) {
        separated = false;
        break;
      }
    }
    if (separated) return p;
  }
  throw PrimeSearchExhausted("no separating prime within " + std::to_string(bit_budget) + " bits", largest);
}

AdornedGraph build_adorned_graph(const EdgeSet& eplus, const Relation& reach) {
  AdornedGraph h;
  h.original = affected_nodes(eplus);
  const std::size_t n = h.original.size();
  auto local = [&](Node v) {
    return static_cast<Node>(std::lower_bound(h.original.begin(), h.original.end(), v) - h.original.begin());
  };
  for (Edge e : eplus) h.real.push_back({local(e.from), local(e.to)});
  std::sort(h.real.begin(), h.real.end());
  h.fictitious = Relation(n);
  for (Node a = 0; a < n; ++a) {
    for (Node b = 0; b < n; ++b) {
      if (a != b && reach.contains(h.original[a], h.original[b])) h.fictitious.insert(a, b);
    }
  }
  return h;
}

RealPathSets::RealPathSets(const AdornedGraph& h) : n_(h.size()), elements_(n_ * n_) {
  const std::size_t m = h.real.size();
  if (m > kMaxAdornedRealEdges) {
    throw GuardExceeded("adorned graph has " + std::to_string(m) + " real edges; limit is " +
                        std::to_string(kMaxAdornedRealEdges));
  }
  const std::uint32_t full = std::uint32_t{1} << m;

  // Nodes a simple realization of `mask` from s must visit: s and every endpoint.
  std::vector<std::uint64_t> endpoints(full, 0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    endpoints[mask] = endpoints[mask & (mask - 1)] | (std::uint64_t{1} << h.real[low].from) |
                      (std::uint64_t{1} << h.real[low].to);
  }

  std::vector<std::uint8_t> feasible(static_cast<std::size_t>(full) * m);
  for (Node s = 0; s < n_; ++s) {
    std::fill(feasible.begin(), feasible.end(), 0);
    const std::uint64_t source_bit = std::uint64_t{1} << s;
    for (std::size_t e = 0; e < m; ++e) {
      const Edge r = h.real[e];
      if (r.to == s) continue;
      if (r.from == s || h.fictitious.contains(s, r.from)) feasible[(std::size_t{1} << e) * m + e] = 1;
    }
    std::vector<std::uint64_t> ends(full, 0);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      const std::uint64_t visited = endpoints[mask] | source_bit;
      for (std::size_t last = 0; last < m; ++last) {
        if (!feasible[mask * m + last]) continue;
        const Node head = h.real[last].to;
        ends[mask] |= std::uint64_t{1} << head;
        for (Node t = 0; t < n_; ++t) {
          if (!((visited >> t) & 1U) && h.fictitious.contains(head, t)) ends[mask] |= std::uint64_t{1} << t;
        }
        for (std::size_t next = 0; next < m; ++next) {
          if ((mask >> next) & 1U) continue;
          const Edge r = h.real[next];
          if ((visited >> r.to) & 1U) continue;
          const bool joined = r.from == head || (!((visited >> r.from) & 1U) && h.fictitious.contains(head, r.from));
          if (joined) feasible[(mask | (std::uint32_t{1} << next)) * m + next] = 1;
        }
      }
      for (Node t = 0; t < n_; ++t) {
        if (t != s && ((ends[mask] >> t) & 1U)) elements_[s * n_ + t].push_back(mask);
      }
    }
  }
}

namespace {

template <class Weight, class Add>
bool isolates_impl(const RealPathSets& sets, const std::vector<Weight>& mask_weight, std::size_t max_real_edges,
                   Add&&) {
  // Pairs may share a minimal element through fictitious edges; only
  // different real-edge sets must get different weights.
  std::map<Weight, std::uint32_t> minima;
  const std::size_t n = sets.size();
  for (Node s = 0; s < n; ++s) {
    for (Node t = 0; t < n; ++t) {
      const Weight* best = nullptr;
      std::uint32_t best_mask = 0;
      std::size_t ties = 0;
      for (std::uint32_t mask : sets.elements(s, t)) {
        if (static_cast<std::size_t>(std::popcount(mask)) > max_real_edges) continue;
        const Weight& wt = mask_weight[mask];
        if (best == nullptr || wt < *best) {
          best = &wt;
          best_mask = mask;
          ties = 1;
        } else if (wt == *best) {
          ++ties;
        }
      }
      if (best == nullptr) continue;
      if (ties != 1) return false;
      const auto [it, fresh] = minima.emplace(*best, best_mask);
      if (!fresh && it->second != best_mask) return false;
    }
  }
  return true;
}

template <class Weight, class Add>
std::vector<Weight> mask_weights(std::span<const Weight> real_weights, Weight zero, Add&& add) {
  const std::uint32_t full = std::uint32_t{1} << real_weights.size();
  std::vector<Weight> out(full, zero);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    out[mask] = add(out[mask & (mask - 1)], real_weights[low]);
  }
  return out;
}

using Digits = std::vector<std::uint64_t>;

Digits add_digits(const Digits& a, const Digits& b) {
  Digits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace

bool strongly_real_isolates(const RealPathSets& sets, std::span<const BigInt> real_weights,
                            std::size_t max_real_edges) {
  for (const BigInt& w : real_weights) {
    if (w <= 0) return false;
  }
  const auto table = mask_weights<BigInt>(real_weights, BigInt(0), [](const BigInt& a, const BigInt& b) { return a + b; });
  return isolates_impl(sets, table, max_real_edges, 0);
}

namespace {

/// Greedy prime selection for one family member. `residues_of(p)` gives the
/// digit contributed by each real edge under prime p.
class PrimeSequenceSearch {
 public:
  PrimeSequenceSearch(const AdornedGraph& h, const RealPathSets& sets, std::size_t levels, unsigned bit_budget)
      : h_(h), sets_(sets), levels_(levels), bit_budget_(bit_budget) {
    const std::size_t n = h.size();
    for (Edge e : h.real) {
      // w0(u,v) = 2^((N+1)u + v) with 1-based u, v.
      exponents_.push_back((n + 1) * (e.from + 1) + (e.to + 1));
    }
  }

  /// Least prime > `after` making level `level` (1-based) pass on top of `prefix`.
  std::uint64_t next_passing(const std::vector<std::uint64_t>& prefix, std::size_t level, std::uint64_t after) const {
    for (std::uint64_t p = next_prime(after); bit_length(p) <= bit_budget_; p = next_prime(p)) {
      std::vector<std::uint64_t> primes = prefix;
      primes.push_back(p);
      if (passes(primes, level)) return p;
    }
    throw FamilyConstructionError("no prime within " + std::to_string(bit_budget_) + " bits at level " +
                                      std::to_string(level),
                                  level);
  }

  /// Completes `prefix` greedily through the last level.
  std::vector<std::uint64_t> complete(std::vector<std::uint64_t> prefix) const {
    while (prefix.size() < levels_) prefix.push_back(next_passing(prefix, prefix.size() + 1, 1));
    return prefix;
  }

 private:
  bool passes(const std::vector<std::uint64_t>& primes, std::size_t level) const {
    std::vector<Digits> digits;
    for (std::size_t exponent : exponents_) {
      Digits d;
      for (std::uint64_t p : primes) d.push_back(pow_mod(2, exponent, p));
      // Real edges must stay positive, which rules out p = 2.
      if (std::all_of(d.begin(), d.end(), [](std::uint64_t x) { return x == 0; })) return false;
      digits.push_back(std::move(d));
    }
    const auto table = mask_weights<Digits>(digits, Digits(primes.size(), 0), add_digits);
    const std::size_t max_real = std::size_t{1} << std::min<std::size_t>(level, 20);
    return isolates_impl(sets_, table, max_real, 0);
  }

  const AdornedGraph& h_;
  const RealPathSets& sets_;
  std::size_t levels_;
  unsigned bit_budget_;
  std::vector<std::size_t> exponents_;
};

std::size_t ceil_log2(std::size_t n) {
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < n) ++levels;
  return levels;
}

}  // namespace

WeightFamily insertion_weight_family(const Graph& g, const Relation& reach, const EdgeSet& eplus,
                                     const WeightAssignment& w, const InsertionFamilyOptions& options) {
  for (Edge e : eplus) {
    if (g.has_edge(e)) throw PreconditionError("inserted edge " + to_string(e) + " already present");
    if (e.from == e.to) throw PreconditionError("self-loop " + to_string(e));
  }
  if (eplus.empty()) throw PreconditionError("insertion family needs at least one inserted edge");
  for (Edge e : g.edges()) {
    if (!w.contains(e) || w.at(e) <= 0) throw PreconditionError("base weights must be positive on every edge");
  }
  const std::size_t n = g.node_count();
  const int k = w.bound_exponent ? *w.bound_exponent : bound_exponent_for(w, n);
  if (w.max_abs() > int_pow(n, k)) throw PreconditionError("base weights exceed their bound exponent");

  const AdornedGraph h = build_adorned_graph(eplus, reach);
  const RealPathSets sets(h);
  const std::size_t big_n = h.size();
  const std::size_t levels = std::max<std::size_t>(1, ceil_log2(big_n));
  const PrimeSequenceSearch search(h, sets, levels, options.prime_bit_budget);

  std::vector<std::vector<std::uint64_t>> sequences;
  const std::vector<std::uint64_t> greedy = search.complete({});
  sequences.push_back(greedy);
  for (std::size_t level = 1; level <= levels; ++level) {
    std::vector<std::uint64_t> prefix(greedy.begin(), greedy.begin() + static_cast<std::ptrdiff_t>(level - 1));
    std::uint64_t last = greedy[level - 1];
    for (std::size_t sibling = 1; sibling < options.sibling_width; ++sibling) {
      last = search.next_passing(prefix, level, last);
      std::vector<std::uint64_t> seq = prefix;
      seq.push_back(last);
      sequences.push_back(search.complete(std::move(seq)));
    }
  }

  std::uint64_t max_prime = 0;
  for (const auto& seq : sequences) max_prime = std::max(max_prime, *std::max_element(seq.begin(), seq.end()));
  // Digits never carry once N^(beta-2) exceeds every prime.
  int beta = 2;
  while (int_pow(big_n, beta - 2) <= max_prime) ++beta;

  WeightFamily family;
  family.adorned_nodes = big_n;
  family.levels = levels;
  family.beta = beta;
  const BigInt scale = int_pow(n, k + 2);
  for (const auto& seq : sequences) {
    FamilyMember member;
    member.primes = seq;
    member.weights.weights = w.weights;
    member.weights.bound_exponent.reset();
    for (Edge e : h.real) {
      const std::size_t exponent = (big_n + 1) * (e.from + 1) + (e.to + 1);
      BigInt wp = 0;
      for (std::size_t j = 1; j <= levels; ++j) {
        wp += int_pow(big_n, beta * static_cast<int>(levels - j)) * pow_mod(2, exponent, seq[j - 1]);
      }
      member.weights.set({h.original[e.from], h.original[e.to]}, scale * wp);
    }
    family.members.push_back(std::move(member));
  }
  return family;
}

WeightAssignment random_isolating_weights(const Graph& g, std::uint64_t seed, std::uint64_t cap,
                                          std::size_t max_retries) {
  if (cap == 0) throw PreconditionError("weight cap must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> draw(1, cap);
  const bool checkable = g.node_count() <= oracle::kMaxEnumerationNodes;
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    WeightAssignment w;
    for (Edge e : g.edges()) w.set(e, draw(rng));
    if (!checkable) return w;
    if (oracle::isolation_report(g, w).is_isolating) {
      w.certification = Certification::kIsolating;
      return w;
    }
  }
  throw std::runtime_error("no isolating weights found within " + std::to_string(max_retries) + " retries");
}

std::vector<WeightAssignment> random_insertion_candidates(const WeightAssignment& base, const EdgeSet& eplus,
                                                          std::uint64_t seed, std::uint64_t cap,
                                                          std::size_t count) {
  if (cap == 0) throw PreconditionError("weight cap must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> draw(1, cap);
  std::vector<WeightAssignment> out;
  for (std::size_t i = 0; i < count; ++i) {
    WeightAssignment w;
    w.weights = base.weights;
    for (Edge e : eplus) w.set(e, draw(rng));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace dynreach
