#pragma once

#include <map>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynreach/graph.hpp"

namespace dynreach {

using BigInt = boost::multiprecision::cpp_int;

enum class Certification { kNone, kNonzeroCirculation, kIsolating, kStronglyRealIsolating };

std::string to_string(Certification c);

/// Integer weights on directed edges, with provenance metadata.
struct WeightAssignment {
  std::map<Edge, BigInt> weights;
  bool skew_symmetric = false;
  /// k with all |w(e)| <= n^k, when known.
  std::optional<int> bound_exponent;
  Certification certification = Certification::kNone;

  bool contains(Edge e) const { return weights.contains(e); }
  const BigInt& at(Edge e) const;
  void set(Edge e, BigInt value) { weights[e] = std::move(value); }

  /// Sets w(e) and, for skew-symmetric assignments, w(reverse e) = -w(e).
  void set_skew(Edge e, const BigInt& value);

  BigInt max_abs() const;
  bool all_positive() const;
  /// True iff every stored edge has its reverse stored with the negated weight.
  bool check_skew_symmetry() const;

  friend bool operator==(const WeightAssignment&, const WeightAssignment&) = default;
};

/// n^exponent as an arbitrary-precision integer.
BigInt int_pow(std::size_t n, int exponent);

/// Smallest k >= 0 with max |w| <= n^k. Requires n >= 2 unless all weights are <= 1.
int bound_exponent_for(const WeightAssignment& w, std::size_t n);

}  // namespace dynreach
