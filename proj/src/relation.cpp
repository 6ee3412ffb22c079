#include "dynreach/relation.hpp"

#include <bit>

namespace dynreach {

Relation::Relation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

void Relation::merge_row(Node a, Node b) {
  for (std::size_t w = 0; w < words_; ++w) bits_[a * words_ + w] |= bits_[b * words_ + w];
}

void Relation::merge_row_from(Node a, const Relation& other, Node b) {
  for (std::size_t w = 0; w < words_; ++w) bits_[a * words_ + w] |= other.bits_[b * words_ + w];
}

std::size_t Relation::count() const {
  std::size_t total = 0;
  for (std::uint64_t word : bits_) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

std::vector<std::pair<Node, Node>> Relation::pairs() const {
  std::vector<std::pair<Node, Node>> out;
  for (Node a = 0; a < n_; ++a) {
    for (Node b = 0; b < n_; ++b) {
      if (contains(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace dynreach
