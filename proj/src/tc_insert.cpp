#include "dynreach/tc_insert.hpp"

#include <algorithm>

#include "dynreach/oracle.hpp"

namespace dynreach {

TcInsertEngine::TcInsertEngine(std::size_t n) : graph_(n, Directedness::kDirected), ans_(n) {
  if (n == 0) throw PreconditionError("domain must be non-empty");
}

void TcInsertEngine::bulk_insert(const EdgeSet& eplus) {
  for (Edge e : eplus) {
    graph_.check_node(e.from);
    graph_.check_node(e.to);
    if (e.from == e.to) throw PreconditionError("self-loop " + to_string(e));
    if (graph_.has_edge(e)) throw PreconditionError("inserting present edge " + to_string(e));
  }
  if (eplus.empty()) {
    stats_ = {};
    return;
  }

  const std::vector<Node> affected = affected_nodes(eplus);
  const std::size_t m = affected.size();
  auto local = [&](Node v) {
    return static_cast<Node>(std::lower_bound(affected.begin(), affected.end(), v) - affected.begin());
  };

  Graph h(m, Directedness::kDirected);
  for (Edge e : eplus) h.add_edge(local(e.from), local(e.to));
  for (Node x = 0; x < m; ++x) {
    for (Node y = 0; y < m; ++y) {
      if (x != y && ans_.contains(affected[x], affected[y]) && !h.has_edge(x, y)) h.add_edge(x, y);
    }
  }
  const Relation tc_h = oracle::transitive_closure(h);
  stats_ = {m, h.edge_count()};

  // Reflexive views: Ans*(s,x1) and Ans*(x2,t) admit s = x1 and x2 = t.
  const std::size_t n = graph_.node_count();
  auto reaches = [&](Node a, Node b) { return a == b || ans_.contains(a, b); };

  // Row x1 of `through`: every t with TC_H(x1,x2) and Ans*(x2,t) for some x2.
  Relation through(n);
  for (Node x1 = 0; x1 < m; ++x1) {
    const Node gx1 = affected[x1];
    for (Node x2 = 0; x2 < m; ++x2) {
      if (!tc_h.contains(x1, x2)) continue;
      const Node gx2 = affected[x2];
      through.insert(gx1, gx2);
      through.merge_row_from(gx1, ans_, gx2);
    }
  }

  Relation next = ans_;
  for (Node s = 0; s < n; ++s) {
    for (Node x1 = 0; x1 < m; ++x1) {
      if (reaches(s, affected[x1])) next.merge_row_from(s, through, affected[x1]);
    }
    next.erase(s, s);
  }
  ans_ = std::move(next);
  for (Edge e : eplus) graph_.add_edge(e.from, e.to);
}

bool TcInsertEngine::query(Node a, Node b) const {
  graph_.check_node(a);
  graph_.check_node(b);
  return a == b || ans_.contains(a, b);
}

}  // namespace dynreach
