#include "dynreach/gf2_polymat.hpp"

#include <algorithm>
#include <bit>

#include "dynreach/graph.hpp"

namespace dynreach {

namespace {

std::size_t word_count(std::size_t bound) { return bound / 64 + 1; }

void require_same_bound(const TruncatedPoly& p, const TruncatedPoly& q) {
  if (p.bound() != q.bound()) {
    throw PreconditionError("polynomial bounds differ: " + std::to_string(p.bound()) + " vs " +
                            std::to_string(q.bound()));
  }
}

}  // namespace

TruncatedPoly::TruncatedPoly(std::size_t bound) : bound_(bound), words_(word_count(bound), 0) {}

TruncatedPoly TruncatedPoly::one(std::size_t bound) { return monomial(bound, 0); }

TruncatedPoly TruncatedPoly::monomial(std::size_t bound, std::size_t degree) {
  TruncatedPoly p(bound);
  if (degree <= bound) p.set(degree, true);
  return p;
}

void TruncatedPoly::set(std::size_t degree, bool value) {
  if (degree > bound_) throw PreconditionError("degree beyond truncation bound");
  const std::uint64_t mask = std::uint64_t{1} << (degree % 64);
  if (value) {
    words_[degree / 64] |= mask;
  } else {
    words_[degree / 64] &= ~mask;
  }
}

void TruncatedPoly::clear_above_bound() {
  const std::size_t used = bound_ % 64 + 1;
  if (used < 64) words_.back() &= (std::uint64_t{1} << used) - 1;
}

bool TruncatedPoly::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::size_t> TruncatedPoly::degrees() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t TruncatedPoly::low_degree() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return bound_ + 1;
}

TruncatedPoly& TruncatedPoly::operator+=(const TruncatedPoly& other) {
  require_same_bound(*this, other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

TruncatedPoly poly_add(const TruncatedPoly& p, const TruncatedPoly& q) {
  TruncatedPoly out = p;
  out += q;
  return out;
}

TruncatedPoly poly_mul(const TruncatedPoly& p, const TruncatedPoly& q) {
  require_same_bound(p, q);
  TruncatedPoly out(p.bound());
  const std::size_t nwords = out.words_.size();
  for (std::size_t i : p.degrees()) {
    // out ^= q << i, dropping words beyond the bound.
    const std::size_t shift_words = i / 64;
    const unsigned shift_bits = static_cast<unsigned>(i % 64);
    for (std::size_t w = 0; w + shift_words < nwords; ++w) {
      const std::uint64_t word = q.words_[w];
      if (word == 0) continue;
      out.words_[w + shift_words] ^= word << shift_bits;
      if (shift_bits != 0 && w + shift_words + 1 < nwords) {
        out.words_[w + shift_words + 1] ^= word >> (64 - shift_bits);
      }
    }
  }
  out.clear_above_bound();
  return out;
}

TruncatedPoly poly_series_inverse(const TruncatedPoly& p) {
  if (!p.is_unit()) throw NonInvertible("series inverse of a polynomial with zero constant term");
  // q_0 = 1; q_d = sum_{i=1..d} p_i q_{d-i}  (signs vanish mod 2)
  const std::size_t b = p.bound();
  const std::vector<std::size_t> terms = p.degrees();
  TruncatedPoly q(b);
  q.set(0, true);
  for (std::size_t d = 1; d <= b; ++d) {
    bool bit = false;
    for (std::size_t i : terms) {
      if (i == 0) continue;
      if (i > d) break;
      if (q.coeff(d - i)) bit = !bit;
    }
    if (bit) q.set(d, true);
  }
  return q;
}

std::string to_string(const TruncatedPoly& p) {
  std::string out;
  for (std::size_t d : p.degrees()) {
    if (!out.empty()) out += " + ";
    out += d == 0 ? "1" : (d == 1 ? "x" : "x^" + std::to_string(d));
  }
  return out.empty() ? "0" : out;
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t bound)
    : rows_(rows), cols_(cols), bound_(bound), entries_(rows * cols, TruncatedPoly(bound)) {}

PolyMatrix PolyMatrix::identity(std::size_t n, std::size_t bound) {
  PolyMatrix m(n, n, bound);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i).set(0, true);
  return m;
}

bool PolyMatrix::constant_term_is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (at(r, c).coeff(0) != (r == c)) return false;
    }
  }
  return true;
}

namespace {

void require_compatible(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.bound() != b.bound()) throw PreconditionError("matrix bounds differ");
}

}  // namespace

PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b) {
  require_compatible(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("matrix shapes differ");
  PolyMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.at(r, c) += b.at(r, c);
  }
  return out;
}

PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
  require_compatible(a, b);
  if (a.cols() != b.rows()) throw PreconditionError("matrix shapes not conformant");
  PolyMatrix out(a.rows(), b.cols(), a.bound());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const TruncatedPoly& left = a.at(r, k);
      if (left.is_zero()) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) {
        const TruncatedPoly& right = b.at(k, c);
        if (right.is_zero()) continue;
        out.at(r, c) += poly_mul(left, right);
      }
    }
  }
  return out;
}

PolyMatrix mat_inverse_local(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const std::size_t bound = m.bound();
  PolyMatrix work = m;
  PolyMatrix inv = PolyMatrix::identity(n, bound);

  auto swap_rows = [n](PolyMatrix& x, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) std::swap(x.at(i, c), x.at(j, c));
  };

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && !work.at(pivot, col).is_unit()) ++pivot;
    if (pivot == n) throw NonInvertible("constant-term matrix is singular over Z_2");
    if (pivot != col) {
      swap_rows(work, pivot, col);
      swap_rows(inv, pivot, col);
    }
    const TruncatedPoly scale = poly_series_inverse(work.at(col, col));
    for (std::size_t c = 0; c < n; ++c) {
      work.at(col, c) = poly_mul(work.at(col, c), scale);
      inv.at(col, c) = poly_mul(inv.at(col, c), scale);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const TruncatedPoly factor = work.at(r, col);
      if (factor.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (!work.at(col, c).is_zero()) work.at(r, c) += poly_mul(factor, work.at(col, c));
        if (!inv.at(col, c).is_zero()) inv.at(r, c) += poly_mul(factor, inv.at(col, c));
      }
    }
  }
  return inv;
}

namespace {

PolyMatrix minor_of(const PolyMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  PolyMatrix out(m.rows() - 1, m.cols() - 1, m.bound());
  for (std::size_t r = 0, rr = 0; r < m.rows(); ++r) {
    if (r == skip_row) continue;
    for (std::size_t c = 0, cc = 0; c < m.cols(); ++c) {
      if (c == skip_col) continue;
      out.at(rr, cc++) = m.at(r, c);
    }
    ++rr;
  }
  return out;
}

}  // namespace

TruncatedPoly mat_determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  if (m.rows() == 0) return TruncatedPoly::one(m.bound());
  if (m.rows() == 1) return m.at(0, 0);
  TruncatedPoly det(m.bound());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (m.at(0, c).is_zero()) continue;
    det += poly_mul(m.at(0, c), mat_determinant(minor_of(m, 0, c)));
  }
  return det;
}

PolyMatrix mat_inverse_adjugate(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("inverse of a non-square matrix");
  if (m.rows() > 6) throw GuardExceeded("adjugate inverse limited to 6x6");
  const std::size_t n = m.rows();
  const TruncatedPoly det = mat_determinant(m);
  if (!det.is_unit()) throw NonInvertible("determinant is not a unit");
  const TruncatedPoly det_inv = poly_series_inverse(det);
  PolyMatrix out(n, n, m.bound());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // (M^-1)_ij = det(M_ji) / det(M); cofactor signs vanish mod 2.
      const TruncatedPoly cofactor =
          n == 1 ? TruncatedPoly::one(m.bound()) : mat_determinant(minor_of(m, j, i));
      out.at(i, j) = poly_mul(cofactor, det_inv);
    }
  }
  return out;
}

UBVDecomposition decompose_delta(std::size_t n, std::size_t bound, std::span<const DeltaEntry> entries) {
  UBVDecomposition d;
  for (const DeltaEntry& e : entries) {
    if (e.row >= n || e.col >= n) throw PreconditionError("delta entry outside the matrix");
    if (e.value.bound() != bound) throw PreconditionError("delta entry bound differs");
    d.rows.push_back(e.row);
    d.cols.push_back(e.col);
  }
  auto unique_sorted = [](std::vector<std::size_t>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  unique_sorted(d.rows);
  unique_sorted(d.cols);
  auto index_in = [](const std::vector<std::size_t>& xs, std::size_t x) {
    return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };

  d.u = PolyMatrix(n, d.rows.size(), bound);
  d.b = PolyMatrix(d.rows.size(), d.cols.size(), bound);
  d.v = PolyMatrix(d.cols.size(), n, bound);
  for (std::size_t j = 0; j < d.rows.size(); ++j) d.u.at(d.rows[j], j).set(0, true);
  for (std::size_t j = 0; j < d.cols.size(); ++j) d.v.at(j, d.cols[j]).set(0, true);
  for (const DeltaEntry& e : entries) d.b.at(index_in(d.rows, e.row), index_in(d.cols, e.col)) += e.value;
  return d;
}

PolyMatrix smw_update(const PolyMatrix& c, const UBVDecomposition& d) {
  if (d.empty()) return c;
  const std::size_t n = c.rows();
  const std::size_t bound = c.bound();
  const std::size_t nr = d.rows.size();
  const std::size_t nc = d.cols.size();
  if (c.cols() != n || d.u.rows() != n || d.v.cols() != n) throw PreconditionError("SMW shape mismatch");

  // U and V are selectors: C U picks columns, V C picks rows, V C U a block.
  PolyMatrix cu(n, nr, bound);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nr; ++j) cu.at(i, j) = c.at(i, d.rows[j]);
  }
  PolyMatrix vc(nc, n, bound);
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < n; ++i) vc.at(j, i) = c.at(d.cols[j], i);
  }
  PolyMatrix vcu(nc, nr, bound);
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t b = 0; b < nr; ++b) vcu.at(a, b) = c.at(d.cols[a], d.rows[b]);
  }

  const PolyMatrix inner = mat_add(PolyMatrix::identity(nr, bound), mat_mul(d.b, vcu));
  const PolyMatrix inner_inv = mat_inverse_local(inner);
  const PolyMatrix correction = mat_mul(mat_mul(cu, inner_inv), mat_mul(d.b, vc));
  return mat_add(c, correction);  // subtraction is addition mod 2
}

void dump(std::ostream& out, const PolyMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::vector<std::size_t> degrees = m.at(r, c).degrees();
      if (degrees.empty()) continue;
      out << r << ' ' << c << " :";
      for (std::size_t i = 0; i < degrees.size(); ++i) out << (i == 0 ? " " : ",") << degrees[i];
      out << '\n';
    }
  }
}

}  // namespace dynreach
