#include <gtest/gtest.h>

#include <random>

#include "fragile/generators.hpp"
#include "fragile/tree_partition.hpp"
#include "oracles.hpp"

using namespace fragile;

namespace {

RootedTreePartition path_partition(int n) {
  RootedTreePartition tp;
  for (int i = 0; i < n; ++i) {
    tp.add_node(i - 1, {}, {});
    tp.beta[static_cast<std::size_t>(i)] = {i};
  }
  return tp;
}

// Maximum |beta(S)| over connected node sets S whose depths span at most
// a-1 levels, by enumerating all node subsets.
long brute_depth_order(const RootedTreePartition& tp, int a) {
  if (a == 1) return 0;
  const int t = tp.size();
  long best = 0;
  for (unsigned mask = 1; mask < (1u << t); ++mask) {
    int top = -1;
    int lo = 1 << 30;
    int hi = -1;
    long sum = 0;
    bool closed = true;
    for (int x = 0; x < t; ++x) {
      if (!(mask >> x & 1)) continue;
      int p = tp.parent[static_cast<std::size_t>(x)];
      if (p < 0 || !(mask >> p & 1)) {
        if (top >= 0) closed = false;
        top = x;
      }
      lo = std::min(lo, tp.depth[static_cast<std::size_t>(x)]);
      hi = std::max(hi, tp.depth[static_cast<std::size_t>(x)]);
      sum += static_cast<long>(tp.beta[static_cast<std::size_t>(x)].size());
    }
    if (closed && hi - lo <= a - 2) best = std::max(best, sum);
  }
  return best;
}

TreeDecompositionWitness td_of(const Graph& g) { return treewidth_upper(g).witness; }

}  // namespace

TEST(BuildGoodtp, PathSmallParameters) {
  Graph g = gen::path(10);
  auto tp = build_goodtp(g, td_of(g), 2, 3, 1, 1);
  EXPECT_EQ(tree_partition_problem(g, tp), "");
  EXPECT_EQ(goodtp_bound(2, 3, 1, 1), 336);
  EXPECT_LE(depth_a_order(tp, 1), 336);
  EXPECT_EQ(tp.beta[0], (VertexSet{0, 1}));
}

TEST(BuildGoodtp, BinaryTreeDepthSix) {
  Graph g = gen::complete_tree(2, 6);
  auto tp = build_goodtp(g, td_of(g), 2, 3, 4, 2);
  EXPECT_EQ(tree_partition_problem(g, tp), "");
  EXPECT_EQ(goodtp_bound(2, 3, 4, 2), 14592);
  EXPECT_TRUE(goodtp_bound_holds(depth_a_order(tp, 4), 2, 3, 4, 2));
}

TEST(BuildGoodtp, Errors) {
  Graph two(4);
  two.add_edge(0, 1);
  two.add_edge(2, 3);
  EXPECT_THROW(build_goodtp(two, td_of(two), 2, 3, 1, 1), PreconditionError);
  Graph star(5);
  for (int i = 1; i < 5; ++i) star.add_edge(0, i);
  EXPECT_THROW(build_goodtp(star, td_of(star), 2, 3, 1, 1), PreconditionError);
  Graph k2 = gen::path(2);
  auto tp = build_goodtp(k2, td_of(k2), 2, 3, 2, 1);
  EXPECT_EQ(tp.size(), 1);
  EXPECT_EQ(tree_partition_problem(k2, tp), "");
}

TEST(BuildGoodtp, BranchingOnLargeTrees) {
  std::mt19937_64 rng(41);
  int branching_seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = gen::random_tree(rng, 200 + 40 * trial, 3);
    for (int b = 1; b <= 2; ++b) {
      auto tp = build_goodtp(g, td_of(g), 2, 3, 3, b);
      EXPECT_EQ(tree_partition_problem(g, tp), "");
      for (char c : tp.branching) branching_seen += c;
      EXPECT_TRUE(goodtp_bound_holds(depth_a_order(tp, 3), 2, 3, 3, b));
    }
  }
  EXPECT_GT(branching_seen, 0);
}

TEST(BuildGoodtp, GridsAndSeriesParallel) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = trial % 2 ? gen::grid(3, 20 + trial * 4) : gen::random_series_parallel(rng, 60 + trial * 10, 4);
    auto td = td_of(g);
    long k = td.width + 1;
    int delta = std::max(3, g.max_degree());
    for (int a = 1; a <= 4; ++a) {
      int b = choose_b(a, delta);
      auto tp = build_goodtp(g, td, k, delta, a, b);
      EXPECT_EQ(tree_partition_problem(g, tp), "");
      EXPECT_TRUE(goodtp_bound_holds(depth_a_order(tp, a), k, delta, a, b));
    }
  }
}

TEST(DepthOrder, Examples) {
  auto tp = path_partition(5);
  EXPECT_EQ(depth_a_order(tp, 1), 0);
  EXPECT_EQ(depth_a_order(tp, 2), 1);
  EXPECT_EQ(depth_a_order(tp, 3), 2);
  EXPECT_EQ(depth_a_order(tp, 9), 5);
}

TEST(DepthOrder, MatchesSubtreeEnumeration) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    int t = 1 + trial % 12;
    RootedTreePartition tp;
    for (int x = 0; x < t; ++x) {
      tp.add_node(x == 0 ? -1 : static_cast<int>(rng() % static_cast<unsigned>(x)), {}, {});
      tp.beta[static_cast<std::size_t>(x)] = VertexSet(1 + rng() % 4, 0);
    }
    for (int a = 1; a <= 5; ++a) EXPECT_EQ(depth_a_order(tp, a), brute_depth_order(tp, a)) << t << " " << a;
  }
}

TEST(TpToDistribution, Examples) {
  Graph g = gen::path(5);
  auto tp = path_partition(5);
  auto one = tp_to_distribution(g, tp, 1);
  ASSERT_EQ(one.dist.entries().size(), 1u);
  EXPECT_EQ(one.dist.entries()[0].set, iota_set(5));
  EXPECT_EQ(one.bound, 0);
  auto two = tp_to_distribution(g, tp, 2);
  EXPECT_EQ(two.dist.entries()[0].set, (VertexSet{0, 2, 4}));
  EXPECT_EQ(two.bound, 1);
  EXPECT_TRUE(verify_thinness(two.dist, 5).within(make_rational(1, 2)));
}

TEST(Bounds, FormulaValues) {
  EXPECT_EQ(goodtp_bound(1, 3, 1, 1), 84 * 2);
  EXPECT_EQ(goodtp_bound(3, 4, 1, 1), 12 * 3 * 3 * 7);
  EXPECT_TRUE(goodtp_bound_holds(14592, 2, 3, 4, 2));
  EXPECT_FALSE(goodtp_bound_holds(14593, 2, 3, 4, 2));
  for (int a = 1; a <= 8; ++a) {
    for (int delta = 3; delta <= 6; ++delta) {
      for (int b = 1; b <= a; ++b) {
        BigInt f = goodtp_bound(2, delta, a, b);
        EXPECT_TRUE(goodtp_bound_holds(f, 2, delta, a, b));
        double exact = 24 * std::pow(delta - 1, a) * (std::pow(delta - 1, b - 1) + std::pow(6.0, double(a) / b));
        EXPECT_NEAR(f.get_d(), std::floor(exact + 1e-9), 1.0 + exact * 1e-12);
      }
    }
  }
  EXPECT_EQ(choose_b(1, 3), 1);
  EXPECT_EQ(choose_b(4, 3), 3);
}

TEST(StarFragileTw, CorpusMembership) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = trial % 3 == 0 ? gen::random_tree(rng, 50 + trial * 7, 3) : gen::random_series_parallel(rng, 40 + trial * 5, 4);
    int k = treewidth_upper(g).value + 1;
    int delta = std::max(3, g.max_degree());
    for (int a = 1; a <= 4; ++a) {
      auto r = star_fragile_tw(g, k, delta, a);
      EXPECT_TRUE(verify_thinness(r.dist, g.order()).within(make_rational(1, a)));
      for (const auto& e : r.dist.entries()) EXPECT_LE(BigInt(star(remove_vertices(g, e.set).graph)), r.bound);
      for (const auto& e : r.dist.entries()) EXPECT_LE(star(remove_vertices(g, e.set).graph), r.measured);
    }
  }
}

TEST(StarFragileTw, DisconnectedAndWidthViolation) {
  Graph g(7);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(4, 5);
  auto r = star_fragile_tw(g, 2, 3, 2);
  EXPECT_TRUE(verify_thinness(r.dist, 7).within(make_rational(1, 2)));
  EXPECT_THROW(star_fragile_tw(gen::clique(4), 2, 3, 2), ClassViolation);
}

TEST(StarFragilePlanar, OuterRate) {
  for (int a = 1; a <= 40; ++a) {
    int a1 = outer_rate(a);
    EXPECT_LT(make_rational(1, a1) + make_rational(1, a + 1), make_rational(1, a)) << a;
    EXPECT_GE(a1, static_cast<int>(std::ceil(std::pow(2.0, std::sqrt(double(a))) - 1e-9)));
  }
  EXPECT_EQ(outer_rate(1), 4);
}

TEST(StarFragilePlanar, SmallPlanarCorpus) {
  std::mt19937_64 rng(6);
  std::vector<Graph> corpus{gen::grid(4, 5), gen::octahedron(), gen::random_triangulation(rng, 12, 20), gen::fan(8), gen::path(9)};
  for (const auto& g : corpus) {
    int delta = std::max(3, g.max_degree());
    for (int a = 1; a <= 2; ++a) {
      auto r = star_fragile_planar(g, delta, a);
      EXPECT_EQ(r.dist.eps(), make_rational(1, r.outer_a) + make_rational(1, r.inner_a));
      EXPECT_LT(r.dist.eps(), make_rational(1, a));
      ASSERT_TRUE(r.dist.is_explicit());
      EXPECT_TRUE(verify_thinness(r.dist, g.order()).within(r.dist.eps()));
      for (const auto& e : r.dist.entries()) EXPECT_LE(BigInt(star(remove_vertices(g, e.set).graph)), r.bound);
    }
  }
  EXPECT_THROW(star_fragile_planar(oracle::path(4), 3, 1), PreconditionError);
}
