#include <gtest/gtest.h>

#include <random>

#include "fragile/gadgets.hpp"
#include "oracles.hpp"

using namespace fragile;

namespace {

// min over X with w(X) <= w(V)/a of f(G - X), by a plain double loop.
int brute_min(const Graph& g, const WeightFunction& w, LbParam param, int a) {
  Rational budget = total_weight(w) / a;
  const int n = g.order();
  int best = 1 << 20;
  for (oracle::Mask x = 0; x < (oracle::Mask{1} << n); ++x) {
    Rational used = 0;
    for (int v = 0; v < n; ++v) {
      if (x >> v & 1) used += w[static_cast<std::size_t>(v)];
    }
    if (used > budget) continue;
    oracle::Mask keep = ((oracle::Mask{1} << n) - 1) & ~x;
    int f = param == LbParam::Star ? oracle::star(g, keep) : oracle::treedepth(oracle::induced(g, keep));
    best = std::min(best, f);
  }
  return best;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

}  // namespace

TEST(TdGadget, SingleVertexAtDepthZero) {
  auto g = build_td_gadget(inner_path(3), 0);
  EXPECT_EQ(g.graph.order(), 1);
  EXPECT_EQ(g.weights[0], 1);
}

TEST(TdGadget, OneLevelOverAnEdge) {
  auto g = build_td_gadget(inner_path(2), 1);
  EXPECT_EQ(g.graph.order(), 3);
  EXPECT_EQ(g.graph.size(), 3u);
  EXPECT_TRUE(g.graph.has_edge(0, 1));
  EXPECT_TRUE(g.graph.has_edge(0, 2));
  EXPECT_EQ(total_weight(g.weights), 2);
}

TEST(TdGadget, TotalWeightIsDepthPlusOne) {
  for (int h : {2, 3}) {
    for (int d = 0; d <= 4; ++d) {
      auto g = build_td_gadget(inner_path(h), d);
      EXPECT_EQ(total_weight(g.weights), d + 1) << "P" << h << " d=" << d;
      EXPECT_EQ(BigInt(g.graph.order()), td_gadget_order(h, d));
      EXPECT_EQ(g.weights[static_cast<std::size_t>(g.handle)], 1);
    }
  }
  EXPECT_EQ(build_td_gadget(inner_path(2), 2).graph.order(), 7);
  EXPECT_EQ(build_td_gadget(inner_path(3), 3).graph.order(), 40);
  EXPECT_EQ(build_td_gadget(inner_binary_tree(2), 2).graph.order(), 57);
}

TEST(TdGadget, JugNeighboursCarryTheHandleWeight) {
  std::vector<InnerGraph> inners{inner_path(2), inner_path(3), inner_two_k1(), inner_binary_tree(1), inner_binary_tree(2)};
  for (const auto& h : inners) {
    for (int d = 1; d <= 4; ++d) {
      auto g = build_td_gadget(h, d);
      if (g.graph.order() > 5000) continue;
      EXPECT_EQ(total_weight(g.weights), d + 1);
      for (Vertex x = 0; x < g.graph.order(); ++x) {
        const int lvl = g.level[static_cast<std::size_t>(x)];
        auto jug = g.jug(x);
        EXPECT_EQ(BigInt(static_cast<long>(jug.size())), td_gadget_order(h.graph.order(), lvl));
        EXPECT_EQ(weight_of(g.weights, jug), (lvl + 1) * g.weights[static_cast<std::size_t>(x)]);
        if (lvl == 0) continue;
        Rational s = 0;
        for (Vertex y : g.graph.neighbors(x)) {
          if (contains(jug, y)) s += g.weights[static_cast<std::size_t>(y)];
        }
        EXPECT_EQ(s, g.weights[static_cast<std::size_t>(x)]) << g.name << " x=" << x;
      }
    }
  }
}

TEST(TdGadget, SizeCapReportsExactCount) {
  try {
    build_td_gadget(inner_path(50), 50);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find(td_gadget_order(50, 50).get_str()), std::string::npos);
  }
  EXPECT_THROW(build_td_gadget(inner_path(2), -1), PreconditionError);
}

TEST(BinaryTree, Shapes) {
  EXPECT_EQ(build_binary_tree(0).graph.order(), 1);
  auto b2 = build_binary_tree(2);
  ASSERT_EQ(b2.graph.order(), 7);
  WeightFunction expect{Rational(1), Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)};
  EXPECT_EQ(b2.weights, expect);
  EXPECT_EQ(total_weight(b2.weights), 3);
  EXPECT_THROW(build_binary_tree(21), PreconditionError);
  for (int d = 0; d <= 10; ++d) {
    auto b = build_binary_tree(d);
    EXPECT_EQ(b.graph.order(), (1 << (d + 1)) - 1);
    EXPECT_EQ(total_weight(b.weights), d + 1);
  }
}

TEST(BinaryTree, MatchesGadgetOverTwoIsolatedVertices) {
  for (int d = 0; d <= 6; ++d) {
    auto b = build_binary_tree(d);
    auto t = build_td_gadget(inner_two_k1(), d);
    EXPECT_EQ(rooted_tree_canonical(b.graph, 0), rooted_tree_canonical(t.graph, t.handle));
    auto wb = b.weights;
    auto wt = t.weights;
    std::sort(wb.begin(), wb.end());
    std::sort(wt.begin(), wt.end());
    EXPECT_EQ(wb, wt);
  }
  EXPECT_NE(rooted_tree_canonical(build_binary_tree(2).graph, 0), rooted_tree_canonical(build_weighted_tree(3, 2).graph, 0));
}

TEST(BinaryTree, TreedepthIsDepthPlusOne) {
  for (int p = 0; p <= 4; ++p) EXPECT_EQ(exact_treedepth(build_binary_tree(p).graph, 64).value, p + 1);
}

TEST(LbCertify, Examples) {
  auto k13 = star_graph(3);
  WeightFunction unit4(4, Rational(1));
  auto r = lb_certify(k13, unit4, LbParam::Star, 2);
  EXPECT_EQ(r.value, 1);
  EXPECT_LE(weight_of(unit4, r.x), Rational(2));

  auto p4 = oracle::path(4);
  r = lb_certify(p4, unit4, LbParam::Td, 4);
  EXPECT_EQ(r.value, 2);

  r = lb_certify(p4, unit4, LbParam::Td, 1);
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.x.size(), 4u);
}

TEST(LbCertify, WitnessAchievesValue) {
  auto g = build_td_gadget(inner_path(2), 2);
  for (int a : {1, 2, 3, 5}) {
    auto r = lb_certify(g, LbParam::Td, a);
    EXPECT_LE(weight_of(g.weights, r.x) * a, total_weight(g.weights));
    EXPECT_EQ(exact_treedepth(remove_vertices(g.graph, r.x).graph).value, r.value);
  }
}

TEST(LbCertify, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 120; ++it) {
    int n = 1 + static_cast<int>(rng() % 12);
    Graph g = oracle::random_graph(rng, n, 0.15 + 0.1 * static_cast<double>(rng() % 5));
    WeightFunction w;
    for (int v = 0; v < n; ++v) w.emplace_back(static_cast<long>(1 + rng() % 6), static_cast<long>(1 + rng() % 3));
    for (auto& q : w) q.canonicalize();
    int a = 1 + static_cast<int>(rng() % 5);
    for (LbParam p : {LbParam::Star, LbParam::Td}) {
      EXPECT_EQ(lb_certify(g, w, p, a).value, brute_min(g, w, p, a)) << "it=" << it;
    }
  }
}

TEST(LbCertify, MonotoneInBudget) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    int n = 2 + static_cast<int>(rng() % 10);
    Graph g = oracle::random_tree(rng, n);
    WeightFunction w(static_cast<std::size_t>(n), Rational(1));
    for (LbParam p : {LbParam::Star, LbParam::Td}) {
      int prev = -1;
      for (int a = 1; a <= 6; ++a) {
        int v = lb_certify(g, w, p, a).value;
        EXPECT_GE(v, prev);
        prev = v;
      }
    }
  }
}

TEST(LbCertify, Limits) {
  Graph big(65);
  WeightFunction w(65, Rational(1));
  EXPECT_THROW(lb_certify(big, w, LbParam::Star, 2), SearchLimitError);
  auto g = build_td_gadget(inner_path(3), 2);
  EXPECT_THROW(lb_certify(g, LbParam::Td, 3, 2), SearchLimitError);
  EXPECT_NO_THROW(lb_certify(g, LbParam::Td, 3, 22));
}

TEST(LbExperiment, Families) {
  auto row = lb_experiment("ternary", 3, 2, 3);
  EXPECT_TRUE(row.certified);
  EXPECT_EQ(row.n, 15);
  GadgetGraph inst;
  row = lb_experiment("TdPd", 2, 2, 3, 22, &inst);
  EXPECT_TRUE(row.certified);
  EXPECT_EQ(row.n, 7);
  EXPECT_EQ(row.min_value, brute_min(inst.graph, inst.weights, LbParam::Td, 2));
  row = lb_experiment("TdTd", 3, 2);
  EXPECT_FALSE(row.certified);
  EXPECT_FALSE(row.note.empty());
  EXPECT_THROW(lb_experiment("nope", 2, 2), PreconditionError);
}

TEST(BinaryTree, CanonicalFormRejectsCycles) {
  EXPECT_THROW(rooted_tree_canonical(build_td_gadget(inner_path(2), 2).graph, 0), PreconditionError);
}
