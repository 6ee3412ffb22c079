#include "dynreach/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace dynreach::oracle {

Relation transitive_closure(const Graph& g) {
  const std::size_t n = g.node_count();
  Relation closure(n);
  std::vector<char> seen(n);
  for (Node s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<Node> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const Node u = queue.front();
      queue.pop_front();
      for (Node v : g.successors(u)) {
        if (v != s) closure.insert(s, v);
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  return closure;
}

std::vector<Node> connected_components(const Graph& g) {
  if (g.directed()) throw PreconditionError("connected_components requires an undirected graph");
  const std::size_t n = g.node_count();
  std::vector<std::optional<Node>> rep(n);
  for (Node s = 0; s < n; ++s) {
    if (rep[s]) continue;
    rep[s] = s;
    std::deque<Node> queue{s};
    while (!queue.empty()) {
      const Node u = queue.front();
      queue.pop_front();
      for (Node v : g.successors(u)) {
        if (!rep[v]) {
          rep[v] = s;
          queue.push_back(v);
        }
      }
    }
  }
  std::vector<Node> out(n);
  for (Node v = 0; v < n; ++v) out[v] = *rep[v];
  return out;
}

namespace {

void check_enumeration_size(const Graph& g) {
  if (g.node_count() > kMaxEnumerationNodes) {
    throw GuardExceeded("exhaustive enumeration limited to " + std::to_string(kMaxEnumerationNodes) +
                        " nodes, got " + std::to_string(g.node_count()));
  }
}

struct StepCounter {
  std::uint64_t steps = 0;
  void tick() {
    if (++steps > kMaxEnumerationSteps) throw GuardExceeded("exhaustive enumeration step budget exceeded");
  }
};

class PathEnumerator {
 public:
  PathEnumerator(const Graph& g, const WeightAssignment& w, IsolationReport& report)
      : g_(g), w_(w), report_(report), on_path_(g.node_count()) {}

  void run(Node s) {
    source_ = s;
    on_path_[s] = 1;
    extend(s, BigInt(0));
    on_path_[s] = 0;
  }

 private:
  void extend(Node u, const BigInt& weight) {
    for (Node v : g_.successors(u)) {
      if (on_path_[v]) continue;
      steps_.tick();
      const BigInt next = weight + w_.at({u, v});
      PairPaths& entry = report_.pairs[source_ * report_.n + v];
      if (!entry.reachable || next < entry.min_weight) {
        entry.reachable = true;
        entry.min_weight = next;
        entry.min_count = 1;
      } else if (next == entry.min_weight) {
        ++entry.min_count;
      }
      on_path_[v] = 1;
      extend(v, next);
      on_path_[v] = 0;
    }
  }

  const Graph& g_;
  const WeightAssignment& w_;
  IsolationReport& report_;
  std::vector<char> on_path_;
  Node source_ = 0;
  StepCounter steps_;
};

}  // namespace

IsolationReport isolation_report(const Graph& g, const WeightAssignment& w) {
  check_enumeration_size(g);
  for (Edge e : g.edges()) {
    if (w.at(e) <= 0) throw PreconditionError("non-positive weight on edge " + to_string(e));
  }
  IsolationReport report;
  report.n = g.node_count();
  report.pairs.assign(report.n * report.n, PairPaths{});
  PathEnumerator enumerator(g, w, report);
  for (Node s = 0; s < report.n; ++s) enumerator.run(s);

  report.is_isolating = true;
  std::set<BigInt> minima;
  bool distinct = true;
  for (Node s = 0; s < report.n; ++s) {
    for (Node t = 0; t < report.n; ++t) {
      const PairPaths& entry = report.at(s, t);
      if (s == t || !entry.reachable) continue;
      if (entry.min_count != 1) report.is_isolating = false;
      if (!minima.insert(entry.min_weight).second) distinct = false;
    }
  }
  report.is_strongly_isolating = report.is_isolating && distinct;
  return report;
}

namespace {

class CycleEnumerator {
 public:
  CycleEnumerator(const Graph& bidirected, const WeightAssignment& w, CirculationReport& report)
      : g_(bidirected), w_(w), report_(report), on_path_(bidirected.node_count()) {}

  void run(Node start) {
    start_ = start;
    path_ = {start};
    on_path_[start] = 1;
    extend(start);
    on_path_[start] = 0;
  }

 private:
  void extend(Node u) {
    for (Node v : g_.successors(u)) {
      steps_.tick();
      if (v == start_) {
        if (path_.size() >= 3) record();
        continue;
      }
      if (v < start_ || on_path_[v]) continue;
      path_.push_back(v);
      on_path_[v] = 1;
      extend(v);
      on_path_[v] = 0;
      path_.pop_back();
    }
  }

  void record() {
    Cycle cycle;
    cycle.nodes = path_;
    BigInt largest = -1;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      const BigInt& weight = w_.at({path_[i], path_[(i + 1) % path_.size()]});
      cycle.weight += weight;
      if (abs(weight) > largest) largest = abs(weight);
    }
    // |w_max| > |W - w_max| for the edge attaining the largest magnitude.
    for (std::size_t i = 0; i < path_.size(); ++i) {
      const BigInt& weight = w_.at({path_[i], path_[(i + 1) % path_.size()]});
      if (abs(weight) == largest) {
        cycle.max_edge_dominates = largest > abs(cycle.weight - weight);
        break;
      }
    }
    if (cycle.weight == 0) report_.has_nonzero_circulation = false;
    if (!cycle.max_edge_dominates) report_.dominance_holds = false;
    report_.cycles.push_back(std::move(cycle));
  }

  const Graph& g_;
  const WeightAssignment& w_;
  CirculationReport& report_;
  std::vector<char> on_path_;
  std::vector<Node> path_;
  Node start_ = 0;
  StepCounter steps_;
};

}  // namespace

CirculationReport circulation_report(const Graph& g, const WeightAssignment& w) {
  check_enumeration_size(g);
  const Graph both = g.bidirected();
  for (Edge e : both.edges()) {
    if (!w.contains(e) || !w.contains(e.reversed()) || w.at(e) != -w.at(e.reversed())) {
      throw PreconditionError("weights not skew-symmetric on edge " + to_string(e));
    }
  }
  CirculationReport report;
  CycleEnumerator enumerator(both, w, report);
  for (Node s = 0; s < both.node_count(); ++s) enumerator.run(s);
  return report;
}

WalkParityTable::WalkParityTable(std::size_t n, std::size_t bound)
    : n_(n), bound_(bound), bits_(n * n * (bound + 1), 0) {}

WalkParityTable count_weighted_walks_mod2(const Graph& g, const WeightAssignment& w, std::size_t bound) {
  const std::size_t n = g.node_count();
  if (n * n * (bound + 1) > kMaxWalkTableCells) throw GuardExceeded("walk table too large");

  // Incoming edges with their weights, per target.
  std::vector<std::vector<std::pair<Node, std::size_t>>> incoming(n);
  for (Edge e : g.edges()) {
    const BigInt& weight = w.at(e);
    if (weight <= 0) throw PreconditionError("non-positive weight on edge " + to_string(e));
    if (weight > bound) continue;  // never contributes within the bound
    incoming[e.to].emplace_back(e.from, weight.convert_to<std::size_t>());
  }

  WalkParityTable table(n, bound);
  for (Node s = 0; s < n; ++s) {
    for (std::size_t i = 0; i <= bound; ++i) {
      for (Node t = 0; t < n; ++t) {
        bool parity = (s == t && i == 0);
        for (const auto& [u, weight] : incoming[t]) {
          if (weight <= i && table.coeff(s, u, i - weight)) parity = !parity;
        }
        if (parity) table.flip(s, t, i);
      }
    }
  }
  return table;
}

SpanningForest spanning_forest(const Graph& g) {
  if (g.directed()) throw PreconditionError("spanning_forest requires an undirected graph");
  const std::size_t n = g.node_count();
  SpanningForest forest;
  forest.parent.assign(n, std::nullopt);
  std::vector<char> seen(n);
  for (Node r = 0; r < n; ++r) {
    if (seen[r]) continue;
    forest.roots.push_back(r);
    seen[r] = 1;
    std::vector<Node> layer{r};
    while (!layer.empty()) {
      std::map<Node, Node> next;  // node -> smallest parent in `layer`
      for (Node u : layer) {      // layer is ascending, so the first writer is smallest
        for (Node v : g.successors(u)) {
          if (!seen[v] && !next.contains(v)) next.emplace(v, u);
        }
      }
      layer.clear();
      for (const auto& [v, u] : next) {
        seen[v] = 1;
        forest.parent[v] = u;
        layer.push_back(v);
      }
    }
  }
  return forest;
}

}  // namespace dynreach::oracle
