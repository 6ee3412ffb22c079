#include "dynreach/undirected.hpp"

#include <algorithm>
#include <map>

#include "dynreach/oracle.hpp"

namespace dynreach {

ForestEngine::ForestEngine(std::size_t n)
    : graph_(n, Directedness::kUndirected), parent_(n), tc_(n), roots_(n) {
  if (n == 0) throw PreconditionError("domain must be non-empty");
  for (Node v = 0; v < n; ++v) roots_[v] = v;
}

EdgeSet ForestEngine::canonical_pairs(const EdgeSet& edges) const {
  EdgeSet out;
  for (Edge e : edges) {
    graph_.check_node(e.from);
    graph_.check_node(e.to);
    if (e.from == e.to) throw PreconditionError("self-loop " + to_string(e));
    out.insert(e.from < e.to ? e : e.reversed());
  }
  return out;
}

void ForestEngine::reroot(Node x) {
  std::optional<Node> prev;
  std::optional<Node> cur = x;
  while (cur) {
    const std::optional<Node> next = parent_[*cur];
    parent_[*cur] = prev;
    prev = cur;
    cur = next;
  }
}

void ForestEngine::join_trees(const std::vector<Node>& affected, const std::vector<Edge>& candidates) {
  // H nodes: the minimum affected node of each tree (roots_ reflects the trees to join).
  std::map<Node, Node> rep_of_root;
  for (Node v : affected) {
    auto [it, inserted] = rep_of_root.emplace(roots_[v], v);
    if (!inserted) it->second = std::min(it->second, v);
  }
  std::vector<Node> reps;
  for (const auto& [root, rep] : rep_of_root) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());
  auto local = [&](Node root) {
    const Node rep = rep_of_root.at(root);
    return static_cast<Node>(std::lower_bound(reps.begin(), reps.end(), rep) - reps.begin());
  };

  Graph h(reps.size(), Directedness::kUndirected);
  for (Edge e : candidates) {
    const Node a = roots_[e.from];
    const Node b = roots_[e.to];
    if (a == b || !rep_of_root.contains(a) || !rep_of_root.contains(b)) continue;
    if (!h.has_edge(local(a), local(b))) h.add_edge(local(a), local(b));
  }
  stats_.h_nodes = reps.size();
  stats_.h_edges = h.edge_count() / 2;

  const oracle::SpanningForest s_h = oracle::spanning_forest(h);
  std::vector<Edge> joins;  // child rep -> parent rep, global ids
  for (Node c = 0; c < reps.size(); ++c) {
    if (s_h.parent[c]) joins.push_back({reps[c], reps[*s_h.parent[c]]});
  }
  std::sort(joins.begin(), joins.end());

  // Tree membership is fixed before any join; `roots_` is not touched until rebuild.
  for (Edge join : joins) {
    const Node child_tree = roots_[join.from];
    const Node parent_tree = roots_[join.to];
    std::optional<Edge> best;
    for (Edge e : candidates) {
      for (Edge oriented : {e, e.reversed()}) {
        if (roots_[oriented.from] == child_tree && roots_[oriented.to] == parent_tree &&
            (!best || oriented < *best)) {
          best = oriented;
        }
      }
    }
    reroot(best->from);
    parent_[best->from] = best->to;
    ++stats_.promoted;
  }
}

void ForestEngine::normalize_roots() {
  const std::size_t n = graph_.node_count();
  std::vector<Node> top(n);
  for (Node v = 0; v < n; ++v) {
    Node cur = v;
    while (parent_[cur]) cur = *parent_[cur];
    top[v] = cur;
  }
  std::map<Node, Node> smallest;  // current root -> minimum node of its tree
  for (Node v = 0; v < n; ++v) {
    auto [it, inserted] = smallest.emplace(top[v], v);
    if (!inserted) it->second = std::min(it->second, v);
  }
  for (const auto& [root, least] : smallest) {
    if (root != least) reroot(least);
  }
}

void ForestEngine::rebuild_closure() {
  const std::size_t n = graph_.node_count();
  tc_ = Relation(n);
  for (Node v = 0; v < n; ++v) {
    std::optional<Node> cur = parent_[v];
    roots_[v] = v;
    while (cur) {
      tc_.insert(v, *cur);
      if (!parent_[*cur]) roots_[v] = *cur;
      cur = parent_[*cur];
    }
  }
}

void ForestEngine::bulk_insert(const EdgeSet& eplus) {
  const EdgeSet pairs = canonical_pairs(eplus);
  for (Edge e : pairs) {
    if (graph_.has_edge(e)) throw PreconditionError("inserting present edge " + to_string(e));
  }
  stats_ = {};
  if (pairs.empty()) return;

  const std::vector<Edge> candidates(pairs.begin(), pairs.end());
  join_trees(affected_nodes(pairs), candidates);
  for (Edge e : pairs) graph_.add_edge(e.from, e.to);
  normalize_roots();
  rebuild_closure();
}

void ForestEngine::bulk_delete(const EdgeSet& eminus) {
  const EdgeSet pairs = canonical_pairs(eminus);
  for (Edge e : pairs) {
    if (!graph_.has_edge(e)) throw PreconditionError("deleting absent edge " + to_string(e));
  }
  stats_ = {};
  if (pairs.empty()) return;

  for (Edge e : pairs) {
    graph_.remove_edge(e.from, e.to);
    if (parent_[e.from] == e.to) {
      parent_[e.from].reset();
      ++stats_.cut;
    } else if (parent_[e.to] == e.from) {
      parent_[e.to].reset();
      ++stats_.cut;
    }
  }
  const std::size_t cut = stats_.cut;
  rebuild_closure();  // TC_S' and the S'-trees

  join_trees(affected_nodes(pairs), graph_.canonical_edges());
  stats_.cut = cut;
  normalize_roots();
  rebuild_closure();
}

void ForestEngine::apply(const BulkChange& change) {
  bulk_insert(change.inserted);
  const Stats inserted = stats_;
  bulk_delete(change.deleted);
  stats_.h_nodes += inserted.h_nodes;
  stats_.h_edges += inserted.h_edges;
  stats_.promoted += inserted.promoted;
}

bool ForestEngine::query(Node a, Node b) const {
  graph_.check_node(a);
  graph_.check_node(b);
  return a == b || roots_[a] == roots_[b];
}

std::optional<std::string> forest_invariant_violation(const ForestEngine& engine) {
  const Graph& g = engine.graph();
  const std::size_t n = g.node_count();
  const auto& parent = engine.parents();
  const std::vector<Node> reps = oracle::connected_components(g);

  Graph forest(n, Directedness::kUndirected);
  for (Node v = 0; v < n; ++v) {
    if (!parent[v]) continue;
    const Node p = *parent[v];
    if (!g.has_edge(v, p)) return "forest edge " + to_string({v, p}) + " not in graph";
    if (forest.has_edge(v, p)) return "forest edge " + to_string({v, p}) + " repeated";
    forest.add_edge(v, p);
  }
  Relation expected(n);
  for (Node v = 0; v < n; ++v) {
    std::vector<char> seen(n);
    std::optional<Node> cur = parent[v];
    while (cur) {
      if (seen[*cur] || *cur == v) return "forest has a cycle through " + std::to_string(v);
      seen[*cur] = 1;
      expected.insert(v, *cur);
      cur = parent[*cur];
    }
  }
  if (!(expected == engine.ancestors())) return "TC_S differs from ancestor closure";
  if (oracle::connected_components(forest) != reps) return "forest does not span the graph";
  for (Node v = 0; v < n; ++v) {
    if (engine.root(v) != reps[v]) return "root of " + std::to_string(v) + " is not the component minimum";
    if (!parent[v] && reps[v] != v) return "non-minimum root " + std::to_string(v);
  }
  return std::nullopt;
}

}  // namespace dynreach
