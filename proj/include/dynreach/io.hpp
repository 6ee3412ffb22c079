#pragma once

// Line-oriented text formats. Blank lines and lines starting with '#' are
// ignored everywhere.
//
//   graph          n <count> <directed|undirected>   then   e <u> <v>
//   decomposition  t <id> <parent-id|-1>             then   b <id> <v>...
//   change script  change / + <u> <v> / - <u> <v> / end
//   weights        w <u> <v> <integer>

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynreach/graph.hpp"
#include "dynreach/tree_decomposition.hpp"
#include "dynreach/weight_assignment.hpp"

namespace dynreach {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

/// Tree ids may be arbitrary integers; they are renumbered densely in order of
/// their `t` lines.
TreeDecomposition read_decomposition(std::istream& in);
void write_decomposition(std::ostream& out, const TreeDecomposition& t);

std::vector<BulkChange> read_change_script(std::istream& in);
void write_change_script(std::ostream& out, const std::vector<BulkChange>& script);

/// With `skew_complete`, an edge listed without its reverse gets w(v,u) = -w(u,v)
/// and the result is marked skew-symmetric.
WeightAssignment read_weights(std::istream& in, bool skew_complete);
/// Writes every stored entry, or only u < v entries when `forward_only`.
void write_weights(std::ostream& out, const WeightAssignment& w, bool forward_only = false);

}  // namespace dynreach
