#pragma once

// Truncated power series over Z_2 and matrices of them.
//
// All arithmetic happens in Z_2[x] / (x^(b+1)); reduction is a ring
// homomorphism from Z_2[[x]], so computing on truncated operands gives the
// truncation of the exact result for +, * and inverses of units.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynreach {

class NonInvertible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient bits for degrees 0..bound, packed into 64-bit words.
class TruncatedPoly {
 public:
  TruncatedPoly() : TruncatedPoly(0) {}
  explicit TruncatedPoly(std::size_t bound);

  static TruncatedPoly one(std::size_t bound);
  /// x^degree, or zero when degree > bound.
  static TruncatedPoly monomial(std::size_t bound, std::size_t degree);

  std::size_t bound() const { return bound_; }
  bool coeff(std::size_t degree) const {
    return degree <= bound_ && ((words_[degree / 64] >> (degree % 64)) & 1U);
  }
  void set(std::size_t degree, bool value);
  void flip(std::size_t degree) { words_[degree / 64] ^= std::uint64_t{1} << (degree % 64); }

  bool is_zero() const;
  bool is_unit() const { return coeff(0); }
  /// Exponents with coefficient 1, ascending.
  std::vector<std::size_t> degrees() const;
  /// Lowest exponent with coefficient 1; bound + 1 for zero.
  std::size_t low_degree() const;

  std::span<const std::uint64_t> words() const { return words_; }

  TruncatedPoly& operator+=(const TruncatedPoly& other);
  friend bool operator==(const TruncatedPoly&, const TruncatedPoly&) = default;

 private:
  friend TruncatedPoly poly_mul(const TruncatedPoly& p, const TruncatedPoly& q);
  void clear_above_bound();

  std::size_t bound_;
  std::vector<std::uint64_t> words_;
};

/// Coefficientwise XOR. Bounds must match.
TruncatedPoly poly_add(const TruncatedPoly& p, const TruncatedPoly& q);
/// Convolution mod 2, truncated. Bounds must match.
TruncatedPoly poly_mul(const TruncatedPoly& p, const TruncatedPoly& q);
/// q with p*q = 1 up to the bound. Throws NonInvertible when p(0) = 0.
TruncatedPoly poly_series_inverse(const TruncatedPoly& p);

inline TruncatedPoly operator+(const TruncatedPoly& p, const TruncatedPoly& q) { return poly_add(p, q); }
inline TruncatedPoly operator*(const TruncatedPoly& p, const TruncatedPoly& q) { return poly_mul(p, q); }

std::string to_string(const TruncatedPoly& p);

/// Dense row-major matrix of truncated polynomials sharing one bound.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t bound);

  static PolyMatrix identity(std::size_t n, std::size_t bound);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t bound() const { return bound_; }

  TruncatedPoly& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const TruncatedPoly& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  /// Entrywise constant terms are the identity (square matrices only).
  bool constant_term_is_identity() const;

  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t bound_ = 0;
  std::vector<TruncatedPoly> entries_;
};

PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b);

/// Gauss-Jordan elimination over the local ring Z_2[[x]]/(x^(b+1)): pivots are
/// rows with unit constant term, inverted by poly_series_inverse. Throws
/// NonInvertible when the constant-term matrix is singular over Z_2.
PolyMatrix mat_inverse_local(const PolyMatrix& m);

/// Laplace-expansion determinant; intended for small matrices.
TruncatedPoly mat_determinant(const PolyMatrix& m);
/// Adjugate / determinant route for cross-checking, limited to 6x6.
PolyMatrix mat_inverse_adjugate(const PolyMatrix& m);

struct DeltaEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  TruncatedPoly value;
};

/// Delta = U * B * V with U selecting the affected rows and V the affected
/// columns; B is the |rows| x |cols| block of entries.
struct UBVDecomposition {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  PolyMatrix u;  // n x |rows|
  PolyMatrix b;  // |rows| x |cols|
  PolyMatrix v;  // |cols| x n

  /// Number of distinct affected rows plus distinct affected columns.
  std::size_t rank() const { return rows.size() + cols.size(); }
  bool empty() const { return rows.empty(); }
};

/// Repeated (row, col) entries accumulate (XOR).
UBVDecomposition decompose_delta(std::size_t n, std::size_t bound, std::span<const DeltaEntry> entries);

/// C - C U (I + B V C U)^-1 B V C: the b-approximation of (A + Delta)^-1 given a
/// b-approximation C of A^-1. Throws NonInvertible when the inner matrix is not.
PolyMatrix smw_update(const PolyMatrix& c, const UBVDecomposition& d);

/// One line per nonzero entry: `r c : d1,d2,...`.
void dump(std::ostream& out, const PolyMatrix& m);

}  // namespace dynreach
