#include "dynreach/replay.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <random>

#include "dynreach/oracle.hpp"
#include "dynreach/tc_insert.hpp"
#include "dynreach/undirected.hpp"

namespace dynreach {

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::kTcInsert: return "tc-insert";
    case EngineKind::kUndirected: return "undirected";
    case EngineKind::kAlgebraic: return "algebraic";
  }
  return "tc-insert";
}

std::optional<EngineKind> parse_engine_kind(const std::string& name) {
  for (EngineKind kind : {EngineKind::kTcInsert, EngineKind::kUndirected, EngineKind::kAlgebraic}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t change_budget(std::size_t n, double c) {
  if (n < 2) return 0;
  return static_cast<std::size_t>(std::ceil(std::pow(std::log2(static_cast<double>(n)), c) - 1e-9));
}

bool within_budget(std::size_t n, std::size_t change_size, double c) { return change_size <= change_budget(n, c); }

namespace {

using Stats = std::vector<std::pair<std::string, std::string>>;

class EngineAdapter {
 public:
  virtual ~EngineAdapter() = default;
  virtual void apply(const BulkChange& change) = 0;
  virtual bool query(Node a, Node b) const = 0;
  virtual Stats stats() const = 0;
  /// Engine-specific consistency against the true closure.
  virtual std::optional<std::string> self_check(const Relation& truth) const = 0;
};

class TcInsertAdapter : public EngineAdapter {
 public:
  explicit TcInsertAdapter(const Graph& g) : engine_(g.node_count()) {
    if (!g.directed()) throw PreconditionError("tc-insert engine needs a directed graph");
    const std::vector<Edge> edges = g.edges();
    engine_.bulk_insert(EdgeSet(edges.begin(), edges.end()));
  }
  void apply(const BulkChange& change) override {
    if (!change.deleted.empty()) throw PreconditionError("tc-insert engine does not support deletions");
    engine_.bulk_insert(change.inserted);
  }
  bool query(Node a, Node b) const override { return engine_.query(a, b); }
  Stats stats() const override {
    return {{"h_nodes", std::to_string(engine_.last_stats().h_nodes)},
            {"h_edges", std::to_string(engine_.last_stats().h_edges)}};
  }
  std::optional<std::string> self_check(const Relation& truth) const override {
    if (!(engine_.closure() == truth)) return "closure differs from oracle";
    return std::nullopt;
  }

 private:
  TcInsertEngine engine_;
};

class ForestAdapter : public EngineAdapter {
 public:
  explicit ForestAdapter(const Graph& g) : engine_(g.node_count()) {
    if (g.directed()) throw PreconditionError("undirected engine needs an undirected graph");
    const std::vector<Edge> edges = g.canonical_edges();
    engine_.bulk_insert(EdgeSet(edges.begin(), edges.end()));
  }
  void apply(const BulkChange& change) override { engine_.apply(change); }
  bool query(Node a, Node b) const override { return engine_.query(a, b); }
  Stats stats() const override {
    const auto& s = engine_.last_stats();
    return {{"h_nodes", std::to_string(s.h_nodes)},
            {"h_edges", std::to_string(s.h_edges)},
            {"promoted", std::to_string(s.promoted)},
            {"cut", std::to_string(s.cut)}};
  }
  std::optional<std::string> self_check(const Relation&) const override {
    return forest_invariant_violation(engine_);
  }

 private:
  ForestEngine engine_;
};

class AlgebraicAdapter : public EngineAdapter {
 public:
  AlgebraicAdapter(const Graph& g, const AlgebraicOptions& options)
      : engine_(AlgebraicEngine::from_random(g, options)) {}
  void apply(const BulkChange& change) override { engine_.apply(change); }
  bool query(Node a, Node b) const override { return engine_.query(a, b); }
  Stats stats() const override {
    const auto& s = engine_.last_stats();
    return {{"family", std::to_string(s.family_size)},
            {"members", std::to_string(s.members)},
            {"bound", std::to_string(s.bound)},
            {"rank", std::to_string(s.delta_rank)},
            {"reinit", std::to_string(s.reinitializations)}};
  }
  std::optional<std::string> self_check(const Relation& truth) const override {
    // Nonzero entries must witness walks, isolating or not.
    auto sound = [&](const AlgebraicMember& m) {
      const std::size_t n = truth.size();
      for (Node a = 0; a < n; ++a) {
        for (Node b = 0; b < n; ++b) {
          if (a != b && !m.c.at(a, b).is_zero() && !truth.contains(a, b)) return false;
        }
      }
      return true;
    };
    for (const AlgebraicMember& m : engine_.members()) {
      if (!sound(m)) return "member entry without a walk";
    }
    return std::nullopt;
  }

 private:
  AlgebraicEngine engine_;
};

std::unique_ptr<EngineAdapter> make_adapter(const Graph& g, const ReplayOptions& options) {
  switch (options.engine) {
    case EngineKind::kTcInsert: return std::make_unique<TcInsertAdapter>(g);
    case EngineKind::kUndirected: return std::make_unique<ForestAdapter>(g);
    case EngineKind::kAlgebraic: return std::make_unique<AlgebraicAdapter>(g, options.algebraic);
  }
  throw PreconditionError("unknown engine");
}

std::vector<std::pair<Node, Node>> query_pairs(std::size_t n, const ReplayOptions& options, std::size_t step) {
  std::vector<std::pair<Node, Node>> pairs;
  if (n <= options.full_query_limit) {
    for (Node a = 0; a < n; ++a) {
      for (Node b = 0; b < n; ++b) pairs.emplace_back(a, b);
    }
    return pairs;
  }
  std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ULL * (step + 1)));
  std::uniform_int_distribution<Node> node(0, static_cast<Node>(n - 1));
  for (std::size_t i = 0; i < options.sampled_queries; ++i) pairs.emplace_back(node(rng), node(rng));
  return pairs;
}

}  // namespace

ReplayReport replay(const Graph& g, const std::vector<BulkChange>& script, const ReplayOptions& options) {
  for (const BulkChange& change : script) {
    if (options.engine == EngineKind::kTcInsert && !change.deleted.empty()) {
      throw PreconditionError("tc-insert engine does not support deletions");
    }
    for (const EdgeSet* set : {&change.inserted, &change.deleted}) {
      for (Edge e : *set) {
        g.check_node(e.from);
        g.check_node(e.to);
      }
    }
  }
  std::unique_ptr<EngineAdapter> engine = make_adapter(g, options);
  Graph current = g;
  const std::size_t n = g.node_count();

  ReplayReport report;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const BulkChange change = normalize_change(current, script[i]);
    StepRecord record;
    record.step = i + 1;
    record.inserted = change.inserted.size();
    record.deleted = change.deleted.size();
    record.affected = affected_nodes(change).size();

    const auto start = std::chrono::steady_clock::now();
    engine->apply(change);
    const auto stop = std::chrono::steady_clock::now();
    if (options.timing) {
      record.elapsed_us = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count());
    }
    current = apply_change(current, change);

    const auto pairs = query_pairs(n, options, i);
    record.queries = pairs.size();
    if (options.oracle_check) {
      const Relation truth = oracle::transitive_closure(current);
      bool agrees = true;
      for (const auto& [a, b] : pairs) {
        if (engine->query(a, b) != (a == b || truth.contains(a, b))) {
          agrees = false;
          record.problem = "query " + std::to_string(a) + " " + std::to_string(b) + " disagrees";
          break;
        }
      }
      if (agrees) {
        record.problem = engine->self_check(truth);
        agrees = !record.problem.has_value();
      }
      record.agrees = agrees;
      if (!agrees) ++report.disagreements;
    } else {
      for (const auto& [a, b] : pairs) engine->query(a, b);
    }
    if (options.budget_c) {
      record.over_budget = !within_budget(n, change.size(), *options.budget_c);
      if (*record.over_budget) ++report.over_budget;
    }
    record.stats = engine->stats();
    report.steps.push_back(std::move(record));
  }
  return report;
}

void write_report(std::ostream& out, const ReplayReport& report) {
  for (const StepRecord& r : report.steps) {
    out << "step " << r.step << " inserted=" << r.inserted << " deleted=" << r.deleted
        << " affected=" << r.affected << " queries=" << r.queries;
    if (r.elapsed_us) out << " elapsed_us=" << *r.elapsed_us;
    if (r.agrees) out << " oracle=" << (*r.agrees ? "agree" : "disagree");
    if (r.over_budget) out << " budget=" << (*r.over_budget ? "over" : "ok");
    for (const auto& [key, value] : r.stats) out << ' ' << key << '=' << value;
    if (r.problem) out << " problem=\"" << *r.problem << '"';
    out << '\n';
  }
  out << "summary steps=" << report.steps.size() << " disagreements=" << report.disagreements
      << " over_budget=" << report.over_budget << " result=" << (report.pass() ? "pass" : "fail") << '\n';
}

}  // namespace dynreach
