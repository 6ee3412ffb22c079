#include <gtest/gtest.h>

#include "dynreach/generators.hpp"
#include "dynreach/oracle.hpp"
#include "dynreach/undirected.hpp"

namespace dynreach {
namespace {

void expect_consistent(const ForestEngine& e) {
  const auto violation = forest_invariant_violation(e);
  EXPECT_FALSE(violation) << *violation;
  const auto reps = oracle::connected_components(e.graph());
  const std::size_t n = e.graph().node_count();
  for (Node a = 0; a < n; ++a) {
    for (Node b = 0; b < n; ++b) {
      EXPECT_EQ(e.query(a, b), reps[a] == reps[b]);
      EXPECT_EQ(e.query(a, b), e.query(b, a));
    }
  }
}

TEST(Forest, InitialStateIsAllRoots) {
  const ForestEngine e(5);
  for (Node v = 0; v < 5; ++v) EXPECT_EQ(e.root(v), v);
  EXPECT_NO_THROW(ForestEngine(1));
  EXPECT_THROW(ForestEngine(0), PreconditionError);
}

TEST(Forest, JoiningSingletonsRootsAtSmallerId) {
  ForestEngine e(2);
  e.bulk_insert({{0, 1}});
  EXPECT_EQ(e.parents()[1], 0U);
  EXPECT_FALSE(e.parents()[0]);
  EXPECT_TRUE(e.query(1, 0));
  expect_consistent(e);
}

TEST(Forest, LexicographicallyLeastRealizingEdge) {
  ForestEngine e(4);
  e.bulk_insert({{0, 1}, {2, 3}});
  ASSERT_EQ(e.parents()[1], 0U);
  ASSERT_EQ(e.parents()[3], 2U);
  e.bulk_insert({{1, 3}, {0, 2}});
  EXPECT_EQ(e.parents()[1], 0U);
  EXPECT_EQ(e.parents()[2], 0U);
  EXPECT_EQ(e.parents()[3], 2U);
  expect_consistent(e);
}

TEST(Forest, DeletionPromotesReplacementEdge) {
  ForestEngine e(3);
  e.bulk_insert({{0, 1}});
  e.bulk_insert({{1, 2}});
  e.bulk_insert({{0, 2}});
  ASSERT_EQ(e.parents()[1], 0U);
  ASSERT_EQ(e.parents()[2], 1U);
  e.bulk_delete({{1, 2}});
  EXPECT_EQ(e.parents()[1], 0U);
  EXPECT_EQ(e.parents()[2], 0U);
  EXPECT_TRUE(e.query(1, 2));
  expect_consistent(e);
}

TEST(Forest, DeletionDisconnects) {
  ForestEngine e(2);
  e.bulk_insert({{0, 1}});
  e.bulk_delete({{1, 0}});
  EXPECT_FALSE(e.query(0, 1));
  EXPECT_FALSE(e.parents()[1]);
  expect_consistent(e);
}

TEST(Forest, RejectsBadChanges) {
  ForestEngine e(3);
  e.bulk_insert({{0, 1}});
  EXPECT_THROW(e.bulk_insert({{1, 0}}), PreconditionError);
  EXPECT_THROW(e.bulk_delete({{1, 2}}), PreconditionError);
  EXPECT_THROW(e.bulk_insert({{2, 2}}), PreconditionError);
  EXPECT_THROW(e.query(0, 3), PreconditionError);
}

TEST(Forest, RandomMixedScriptsKeepInvariants) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph start = random_gnp(14, 0.1, seed, Directedness::kUndirected);
    ForestEngine e(14);
    const auto initial = start.canonical_edges();
    e.bulk_insert(EdgeSet(initial.begin(), initial.end()));
    expect_consistent(e);
    for (const BulkChange& c : random_change_script(start, seed, {8, 6, 0.5})) {
      e.apply(c);
      expect_consistent(e);
      if (::testing::Test::HasFailure()) return;
    }
  }
}

TEST(Forest, DeletingWholeBatchRestoresConnectivity) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph start = random_gnp(12, 0.12, seed, Directedness::kUndirected);
    ForestEngine e(12);
    const auto initial = start.canonical_edges();
    e.bulk_insert(EdgeSet(initial.begin(), initial.end()));
    const auto before = oracle::connected_components(e.graph());
    const BulkChange c = random_change_script(start, seed + 1, {1, 6, 0.0}).front();
    e.bulk_insert(c.inserted);
    expect_consistent(e);
    e.bulk_delete(c.inserted);
    expect_consistent(e);
    EXPECT_EQ(oracle::connected_components(e.graph()), before);
  }
}

TEST(Forest, DeterministicForSameInput) {
  const Graph start = random_gnp(12, 0.15, 9, Directedness::kUndirected);
  const auto script = random_change_script(start, 4, {6, 5, 0.5});
  auto run = [&] {
    ForestEngine e(12);
    const auto initial = start.canonical_edges();
    e.bulk_insert(EdgeSet(initial.begin(), initial.end()));
    for (const BulkChange& c : script) e.apply(c);
    return e.parents();
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace dynreach
