#pragma once

#include <initializer_list>
#include <vector>

#include "dynreach/gf2_polymat.hpp"
#include "dynreach/graph.hpp"
#include "dynreach/relation.hpp"

namespace dynreach::testing {

inline Graph make_graph(std::size_t n, std::initializer_list<Edge> edges,
                        Directedness kind = Directedness::kDirected) {
  Graph g(n, kind);
  for (Edge e : edges) g.add_edge(e.from, e.to);
  return g;
}

/// Floyd-Warshall boolean closure, irreflexive unless a node lies on a cycle.
inline Relation warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> r(n, std::vector<char>(n));
  for (Edge e : g.edges()) r[e.from][e.to] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) r[i][j] |= r[k][j];
    }
  }
  Relation out(n);
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i != j && r[i][j]) out.insert(i, j);
    }
  }
  return out;
}

/// Quadratic convolution over individual coefficients.
inline TruncatedPoly naive_mul(const TruncatedPoly& p, const TruncatedPoly& q) {
  TruncatedPoly out(p.bound());
  for (std::size_t i = 0; i <= p.bound(); ++i) {
    for (std::size_t j = 0; i + j <= p.bound(); ++j) {
      if (p.coeff(i) && q.coeff(j)) out.flip(i + j);
    }
  }
  return out;
}

/// Schoolbook matrix product using naive_mul.
inline PolyMatrix naive_mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.rows(), b.cols(), a.bound());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t k = 0; k < a.cols(); ++k) out.at(i, j) += naive_mul(a.at(i, k), b.at(k, j));
    }
  }
  return out;
}

}  // namespace dynreach::testing
