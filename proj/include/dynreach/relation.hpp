#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dynreach/graph.hpp"

namespace dynreach {

/// Dense binary relation over nodes 0..n-1, stored as one bit row per node.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n);

  std::size_t size() const { return n_; }

  bool contains(Node a, Node b) const {
    return (bits_[a * words_ + b / 64] >> (b % 64)) & 1U;
  }
  void insert(Node a, Node b) { bits_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64); }
  void erase(Node a, Node b) { bits_[a * words_ + b / 64] &= ~(std::uint64_t{1} << (b % 64)); }

  /// row(a) |= row(b)
  void merge_row(Node a, Node b);
  /// row(a) |= other.row(b)
  void merge_row_from(Node a, const Relation& other, Node b);

  std::size_t count() const;
  std::vector<std::pair<Node, Node>> pairs() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace dynreach
