#include <gtest/gtest.h>

#include <random>

#include "dynreach/gf2_polymat.hpp"
#include "dynreach/graph.hpp"
#include "test_support.hpp"

namespace dynreach {
namespace {

using testing::naive_mat_mul;
using testing::naive_mul;

TruncatedPoly poly(std::size_t bound, std::initializer_list<std::size_t> degrees) {
  TruncatedPoly p(bound);
  for (std::size_t d : degrees) p.set(d, true);
  return p;
}

TruncatedPoly random_poly(std::size_t bound, std::mt19937_64& rng, double density = 0.5) {
  std::bernoulli_distribution coin(density);
  TruncatedPoly p(bound);
  for (std::size_t d = 0; d <= bound; ++d) p.set(d, coin(rng));
  return p;
}

PolyMatrix random_matrix(std::size_t rows, std::size_t cols, std::size_t bound, std::mt19937_64& rng) {
  PolyMatrix m(rows, cols, bound);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = random_poly(bound, rng);
  }
  return m;
}

/// I + (matrix with zero constant terms): always invertible over the local ring.
PolyMatrix random_unipotent(std::size_t n, std::size_t bound, std::mt19937_64& rng) {
  PolyMatrix m = random_matrix(n, n, bound, rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.at(i, j).set(0, i == j);
  }
  return m;
}

TEST(PolyAdd, CharacteristicTwo) {
  EXPECT_TRUE(poly_add(poly(4, {0, 1}), poly(4, {0, 1})).is_zero());
  const TruncatedPoly p = poly(4, {1, 3});
  EXPECT_EQ(p + TruncatedPoly(4), p);
}

TEST(PolyAdd, MatchesCoefficientLoop) {
  std::mt19937_64 rng(1);
  for (std::size_t bound : {0, 5, 63, 64, 130}) {
    const TruncatedPoly p = random_poly(bound, rng);
    const TruncatedPoly q = random_poly(bound, rng);
    const TruncatedPoly s = p + q;
    for (std::size_t d = 0; d <= bound; ++d) EXPECT_EQ(s.coeff(d), p.coeff(d) != q.coeff(d));
  }
  EXPECT_THROW(poly_add(TruncatedPoly(3), TruncatedPoly(4)), PreconditionError);
}

TEST(PolyMul, FrobeniusAndTruncation) {
  EXPECT_EQ(poly(5, {0, 1}) * poly(5, {0, 1}), poly(5, {0, 2}));
  EXPECT_TRUE((TruncatedPoly::monomial(7, 7) * TruncatedPoly::monomial(7, 1)).is_zero());
  EXPECT_TRUE(TruncatedPoly::monomial(7, 8).is_zero());
}

TEST(PolyMul, MatchesNaiveConvolution) {
  std::mt19937_64 rng(2);
  for (std::size_t bound : {0, 1, 31, 63, 64, 65, 127, 200}) {
    for (int round = 0; round < 10; ++round) {
      const TruncatedPoly p = random_poly(bound, rng);
      const TruncatedPoly q = random_poly(bound, rng);
      EXPECT_EQ(p * q, naive_mul(p, q)) << "bound " << bound;
    }
  }
  EXPECT_THROW(poly_mul(TruncatedPoly(3), TruncatedPoly(4)), PreconditionError);
}

TEST(SeriesInverse, GeometricSeries) {
  EXPECT_EQ(poly_series_inverse(poly(3, {0, 1})), poly(3, {0, 1, 2, 3}));
  EXPECT_EQ(poly_series_inverse(TruncatedPoly::one(9)), TruncatedPoly::one(9));
  EXPECT_THROW(poly_series_inverse(poly(3, {1})), NonInvertible);
}

TEST(SeriesInverse, MultipliesBackToOne) {
  std::mt19937_64 rng(3);
  for (std::size_t bound : {0, 7, 64, 150}) {
    for (int round = 0; round < 10; ++round) {
      TruncatedPoly p = random_poly(bound, rng);
      p.set(0, true);
      EXPECT_EQ(p * poly_series_inverse(p), TruncatedPoly::one(bound));
    }
  }
}

TEST(PolyMatrix, IdentityAndCharacteristicTwo) {
  std::mt19937_64 rng(4);
  const PolyMatrix m = random_matrix(4, 4, 20, rng);
  EXPECT_EQ(mat_mul(m, PolyMatrix::identity(4, 20)), m);
  EXPECT_EQ(mat_mul(PolyMatrix::identity(4, 20), m), m);
  const PolyMatrix zero = mat_add(m, m);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(zero.at(i, j).is_zero());
  }
}

TEST(PolyMatrix, MultiplicationIsAssociativeAndMatchesNaive) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 10; ++round) {
    const PolyMatrix a = random_matrix(4, 4, 40, rng);
    const PolyMatrix b = random_matrix(4, 4, 40, rng);
    const PolyMatrix c = random_matrix(4, 4, 40, rng);
    EXPECT_EQ(mat_mul(mat_mul(a, b), c), mat_mul(a, mat_mul(b, c)));
    EXPECT_EQ(mat_mul(a, b), naive_mat_mul(a, b));
  }
}

TEST(PolyMatrix, RejectsShapeAndBoundMismatch) {
  EXPECT_THROW(mat_mul(PolyMatrix(2, 3, 4), PolyMatrix(2, 3, 4)), PreconditionError);
  EXPECT_THROW(mat_add(PolyMatrix(2, 2, 4), PolyMatrix(2, 3, 4)), PreconditionError);
  EXPECT_THROW(mat_add(PolyMatrix(2, 2, 4), PolyMatrix(2, 2, 5)), PreconditionError);
}

TEST(LocalInverse, IdentityAndProductBack) {
  EXPECT_EQ(mat_inverse_local(PolyMatrix::identity(3, 10)), PolyMatrix::identity(3, 10));
  std::mt19937_64 rng(6);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 1 + rng() % 6;
    PolyMatrix m = random_matrix(n, n, 50, rng);
    // Random constant terms; skip singular ones.
    PolyMatrix inv;
    try {
      inv = mat_inverse_local(m);
    } catch (const NonInvertible&) {
      EXPECT_THROW(mat_inverse_adjugate(m), NonInvertible);
      continue;
    }
    EXPECT_EQ(mat_mul(m, inv), PolyMatrix::identity(n, 50));
    EXPECT_EQ(inv, mat_inverse_adjugate(m));
  }
}

TEST(LocalInverse, SingularConstantTermThrows) {
  PolyMatrix m(2, 2, 5);
  m.at(0, 0) = poly(5, {0});
  m.at(0, 1) = poly(5, {0, 2});
  m.at(1, 0) = poly(5, {0});
  m.at(1, 1) = poly(5, {0});
  EXPECT_THROW(mat_inverse_local(m), NonInvertible);
  EXPECT_THROW(mat_inverse_local(PolyMatrix(2, 3, 5)), PreconditionError);
}

TEST(DecomposeDelta, ProductReproducesDelta) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<DeltaEntry> entries;
    PolyMatrix expected(n, n, 30);
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t i = 0; i < count; ++i) {
      const DeltaEntry e{rng() % n, rng() % n, random_poly(30, rng)};
      expected.at(e.row, e.col) += e.value;
      entries.push_back(e);
    }
    const UBVDecomposition d = decompose_delta(n, 30, entries);
    EXPECT_EQ(mat_mul(mat_mul(d.u, d.b), d.v), expected);
    EXPECT_LE(d.rank(), 2 * entries.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d.rows.size(); ++j) {
        EXPECT_TRUE(d.u.at(i, j).is_zero() || d.u.at(i, j) == TruncatedPoly::one(30));
      }
    }
  }
}

TEST(DecomposeDelta, SingleEntry) {
  const DeltaEntry e{1, 2, poly(8, {3})};
  const UBVDecomposition d = decompose_delta(4, 8, std::span<const DeltaEntry>(&e, 1));
  EXPECT_EQ(d.rank(), 2U);
  EXPECT_EQ(d.b.rows(), 1U);
  EXPECT_EQ(d.b.at(0, 0), poly(8, {3}));
  EXPECT_THROW(decompose_delta(2, 8, std::span<const DeltaEntry>(&e, 1)), PreconditionError);
}

TEST(Smw, MatchesDirectInverse) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t bound = 1 + rng() % 64;
    const PolyMatrix m = random_unipotent(n, bound, rng);
    const PolyMatrix c = mat_inverse_local(m);
    std::vector<DeltaEntry> entries;
    for (std::size_t i = 0; i < 2; ++i) {
      TruncatedPoly value = random_poly(bound, rng);
      value.set(0, false);
      entries.push_back({rng() % n, rng() % n, value});
    }
    const UBVDecomposition d = decompose_delta(n, bound, entries);
    PolyMatrix changed = m;
    for (const DeltaEntry& e : entries) changed.at(e.row, e.col) += e.value;
    EXPECT_EQ(smw_update(c, d), mat_inverse_local(changed));
  }
}

TEST(Smw, EmptyDeltaIsIdentityUpdate) {
  std::mt19937_64 rng(9);
  const PolyMatrix c = mat_inverse_local(random_unipotent(3, 10, rng));
  EXPECT_EQ(smw_update(c, decompose_delta(3, 10, {})), c);
}

TEST(Dump, ListsNonzeroEntries) {
  PolyMatrix m(2, 2, 5);
  m.at(0, 1) = poly(5, {0, 3});
  std::ostringstream out;
  dump(out, m);
  EXPECT_EQ(out.str(), "0 1 : 0,3\n");
}

}  // namespace
}  // namespace dynreach
