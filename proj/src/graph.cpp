#include "dynreach/graph.hpp"

#include <algorithm>

namespace dynreach {

Graph::Graph(std::size_t n, Directedness kind)
    : kind_(kind), succ_(n), pred_(n) {}

void Graph::check_node(Node u) const {
  if (u >= node_count()) {
    throw PreconditionError("node " + std::to_string(u) + " out of range (n=" +
                            std::to_string(node_count()) + ")");
  }
}

bool Graph::has_edge(Node u, Node v) const {
  if (u >= node_count() || v >= node_count()) return false;
  return succ_[u].contains(v);
}

void Graph::add_edge(Node u, Node v) {
  check_node(u);
  check_node(v);
  if (u == v) throw PreconditionError("self-loop " + to_string({u, v}));
  if (has_edge(u, v)) throw PreconditionError("edge " + to_string({u, v}) + " already present");
  succ_[u].insert(v);
  pred_[v].insert(u);
  ++edge_count_;
  if (!directed()) {
    succ_[v].insert(u);
    pred_[u].insert(v);
    ++edge_count_;
  }
}

void Graph::remove_edge(Node u, Node v) {
  if (!has_edge(u, v)) throw PreconditionError("edge " + to_string({u, v}) + " absent");
  succ_[u].erase(v);
  pred_[v].erase(u);
  --edge_count_;
  if (!directed()) {
    succ_[v].erase(u);
    pred_[u].erase(v);
    --edge_count_;
  }
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Node u = 0; u < node_count(); ++u) {
    for (Node v : succ_[u]) out.push_back({u, v});
  }
  return out;
}

std::vector<Edge> Graph::canonical_edges() const {
  if (directed()) return edges();
  std::vector<Edge> out;
  for (Node u = 0; u < node_count(); ++u) {
    for (Node v : succ_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::bidirected() const {
  Graph out(node_count(), Directedness::kDirected);
  for (Node u = 0; u < node_count(); ++u) {
    for (Node v : succ_[u]) {
      if (!out.has_edge(u, v)) out.add_edge(u, v);
      if (!out.has_edge(v, u)) out.add_edge(v, u);
    }
  }
  return out;
}

std::size_t Graph::degree(Node u) const {
  check_node(u);
  std::set<Node> nb = succ_[u];
  nb.insert(pred_[u].begin(), pred_[u].end());
  return nb.size();
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (Node u = 0; u < node_count(); ++u) best = std::max(best, degree(u));
  return best;
}

namespace {

Edge canonical(const Graph& g, Edge e) {
  if (!g.directed() && e.from > e.to) return e.reversed();
  return e;
}

void check_change_edge(const Graph& g, Edge e) {
  g.check_node(e.from);
  g.check_node(e.to);
  if (e.from == e.to) throw PreconditionError("change lists self-loop " + to_string(e));
}

}  // namespace

BulkChange normalize_change(const Graph& g, const BulkChange& c) {
  EdgeSet ins;
  EdgeSet del;
  for (Edge e : c.inserted) {
    check_change_edge(g, e);
    ins.insert(canonical(g, e));
  }
  for (Edge e : c.deleted) {
    check_change_edge(g, e);
    del.insert(canonical(g, e));
  }
  BulkChange out;
  for (Edge e : ins) {
    if (del.contains(e)) continue;  // insert-then-delete: net absent
    if (!g.has_edge(e)) out.inserted.insert(e);
  }
  for (Edge e : del) {
    if (g.has_edge(e)) out.deleted.insert(e);
  }
  return out;
}

Graph apply_change(const Graph& g, const BulkChange& c) {
  Graph out = g;
  for (Edge e : c.inserted) {
    if (c.deleted.contains(e)) {
      throw PreconditionError("edge " + to_string(e) + " both inserted and deleted");
    }
    check_change_edge(g, e);
    out.add_edge(e.from, e.to);
  }
  for (Edge e : c.deleted) {
    check_change_edge(g, e);
    if (!g.has_edge(e)) throw PreconditionError("deleting absent edge " + to_string(e));
    out.remove_edge(e.from, e.to);
  }
  return out;
}

std::vector<Node> affected_nodes(const EdgeSet& edges) {
  std::set<Node> nodes;
  for (Edge e : edges) {
    nodes.insert(e.from);
    nodes.insert(e.to);
  }
  return {nodes.begin(), nodes.end()};
}

std::vector<Node> affected_nodes(const BulkChange& c) {
  EdgeSet all = c.inserted;
  all.insert(c.deleted.begin(), c.deleted.end());
  return affected_nodes(all);
}

std::string to_string(Edge e) {
  return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

}  // namespace dynreach
