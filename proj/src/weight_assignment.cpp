#include "dynreach/weight_assignment.hpp"

namespace dynreach {

std::string to_string(Certification c) {
  switch (c) {
    case Certification::kNone: return "none";
    case Certification::kNonzeroCirculation: return "nonzero_circulation";
    case Certification::kIsolating: return "isolating";
    case Certification::kStronglyRealIsolating: return "strongly_real_isolating";
  }
  return "none";
}

const BigInt& WeightAssignment::at(Edge e) const {
  auto it = weights.find(e);
  if (it == weights.end()) throw PreconditionError("no weight for edge " + to_string(e));
  return it->second;
}

void WeightAssignment::set_skew(Edge e, const BigInt& value) {
  weights[e] = value;
  if (skew_symmetric) weights[e.reversed()] = -value;
}

BigInt WeightAssignment::max_abs() const {
  BigInt best = 0;
  for (const auto& [e, value] : weights) {
    const BigInt a = abs(value);
    if (a > best) best = a;
  }
  return best;
}

bool WeightAssignment::all_positive() const {
  for (const auto& [e, value] : weights) {
    if (value <= 0) return false;
  }
  return true;
}

bool WeightAssignment::check_skew_symmetry() const {
  for (const auto& [e, value] : weights) {
    auto it = weights.find(e.reversed());
    if (it == weights.end() || it->second != -value) return false;
  }
  return true;
}

BigInt int_pow(std::size_t n, int exponent) {
  BigInt result = 1;
  for (int i = 0; i < exponent; ++i) result *= n;
  return result;
}

int bound_exponent_for(const WeightAssignment& w, std::size_t n) {
  const BigInt top = w.max_abs();
  if (top <= 1) return 0;
  if (n < 2) throw PreconditionError("weight bound exponent undefined for n < 2");
  int k = 0;
  BigInt power = 1;
  while (power < top) {
    power *= n;
    ++k;
  }
  return k;
}

}  // namespace dynreach
