#include <gtest/gtest.h>

#include <random>

#include "fragile/thin_dist.hpp"

using namespace fragile;

namespace {

Rational q(long p, long r) { return make_rational(p, r); }

ThinDistribution point(VertexSet s) { return ThinDistribution::explicit_dist({{std::move(s), Rational(1)}}, Rational(0)); }

}  // namespace

TEST(Uniform, TwoSingletons) {
  auto d = uniform_on_disjoint({{0}, {1}}, 2);
  ASSERT_EQ(d.entries().size(), 2u);
  EXPECT_EQ(d.entries()[0].prob, q(1, 2));
  auto r = verify_thinness(d, 2);
  EXPECT_TRUE(r.within(q(1, 2)));
  EXPECT_EQ(r.max_marginal, q(1, 2));
}

TEST(Uniform, EmptySetsCollectMass) {
  auto d = uniform_on_disjoint({{0}, {}, {}}, 3);
  ASSERT_EQ(d.entries().size(), 2u);
  EXPECT_EQ(d.entries()[0].set, VertexSet{});
  EXPECT_EQ(d.entries()[0].prob, q(2, 3));
  EXPECT_EQ(verify_thinness(d, 1).total_mass, Rational(1));
}

TEST(Uniform, Errors) {
  EXPECT_THROW(uniform_on_disjoint({{0}, {1}}, 3), PreconditionError);
  EXPECT_THROW(uniform_on_disjoint({{0, 1}, {1}}, 2), PreconditionError);
}

TEST(VerifyThinness, DetectsExcessAndBadMass) {
  auto d = ThinDistribution::explicit_dist({{{0}, q(1, 2)}, {{0, 1}, q(1, 2)}}, q(1, 2));
  auto r = verify_thinness(d, 2);
  EXPECT_TRUE(r.mass_ok);
  EXPECT_EQ(r.max_marginal, Rational(1));
  EXPECT_EQ(r.worst_vertex, 0);
  EXPECT_FALSE(r.within(q(1, 2)));
  auto bad = ThinDistribution::explicit_dist({{{0}, q(1, 3)}}, q(1, 3));
  EXPECT_FALSE(verify_thinness(bad, 1).mass_ok);
}

TEST(Compose, IdentityOuter) {
  auto d2 = uniform_on_disjoint({{0, 1}, {2}}, 2);
  auto out = compose(point({}), {{VertexSet{}, d2}});
  ASSERT_TRUE(out.is_explicit());
  EXPECT_EQ(out.entries(), d2.entries());
  EXPECT_EQ(out.eps(), q(1, 2));
}

TEST(Compose, BoundsAdd) {
  auto d1 = uniform_on_disjoint({{0}, {1}, {2}, {3}}, 4);
  DistributionFamily fam;
  for (const auto& e : d1.entries()) fam[e.set] = uniform_on_disjoint({{4}, {5}, {6}, {7}}, 4);
  auto out = compose(d1, fam);
  EXPECT_EQ(out.eps(), q(1, 2));
  EXPECT_TRUE(verify_thinness(out, 8).within(q(1, 2)));
  EXPECT_TRUE(derivation_consistent(out.derivation()));
  EXPECT_EQ(derived_eps(out.derivation()), q(1, 2));
}

TEST(Compose, ProductSupport) {
  auto d1 = ThinDistribution::explicit_dist({{{0}, q(1, 3)}, {{1}, q(2, 3)}}, q(2, 3));
  DistributionFamily fam;
  fam[{0}] = ThinDistribution::explicit_dist({{{2}, q(1, 4)}, {{3}, q(3, 4)}}, q(3, 4));
  fam[{1}] = ThinDistribution::explicit_dist({{{2}, q(1, 2)}, {{3}, q(1, 2)}}, q(1, 2));
  auto out = compose(d1, fam);
  ASSERT_EQ(out.entries().size(), 4u);
  std::map<VertexSet, Rational> m;
  for (const auto& e : out.entries()) m[e.set] = e.prob;
  EXPECT_EQ((m[{0, 2}]), q(1, 12));
  EXPECT_EQ((m[{0, 3}]), q(3, 12));
  EXPECT_EQ((m[{1, 2}]), q(1, 3));
  EXPECT_EQ((m[{1, 3}]), q(1, 3));
  EXPECT_EQ(verify_thinness(out, 4).total_mass, Rational(1));
}

TEST(Compose, MissingFamilyMember) {
  auto d1 = uniform_on_disjoint({{0}, {1}}, 2);
  DistributionFamily fam;
  fam[{0}] = point({});
  EXPECT_THROW(compose(d1, fam), PreconditionError);
}

TEST(Compose, SamplerMarginalsStayBelowCertificate) {
  const int n = 12;
  auto d1 = uniform_on_disjoint({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}}, 4);
  DistributionFamily fam;
  for (const auto& e : d1.entries()) {
    std::vector<VertexSet> classes(4);
    for (Vertex v = 0; v < n; ++v) {
      if (!contains(e.set, v)) classes[static_cast<std::size_t>((v * 7 + e.set[0]) % 4)].push_back(v);
    }
    fam[e.set] = uniform_on_disjoint(classes, 4);
  }
  auto out = compose(d1, fam, 99, 0);
  ASSERT_FALSE(out.is_explicit());
  EXPECT_EQ(out.eps(), q(1, 2));
  const int samples = 100000;
  std::vector<int> hits(n, 0);
  for (int i = 0; i < samples; ++i) {
    for (Vertex v : out.sample(static_cast<std::uint64_t>(i))) ++hits[static_cast<std::size_t>(v)];
  }
  for (int v = 0; v < n; ++v) EXPECT_LE(hits[static_cast<std::size_t>(v)] / double(samples), 0.5 + 0.01) << v;
  auto again = compose(d1, fam, 99, 0);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(out.sample(i), again.sample(i));
}

TEST(FractionalColoring, FromTwoSetPartition) {
  auto d = uniform_on_disjoint({{0, 1}, {2, 3}}, 2);
  auto k = to_fractional_coloring(d, 1, 4);
  EXPECT_EQ(k.total(), Rational(2));
  for (const auto& c : covering(k, 4)) EXPECT_GE(c, Rational(1));
}

TEST(FractionalColoring, PointMassOnEmpty) {
  auto k = to_fractional_coloring(point({}), 3, 5);
  ASSERT_EQ(k.entries.size(), 1u);
  EXPECT_EQ(k.entries[0].set, iota_set(5));
  EXPECT_EQ(k.entries[0].prob, q(4, 3));
}

TEST(FractionalColoring, InsufficientThinness) {
  auto d = uniform_on_disjoint({{0}, {1}}, 2);
  EXPECT_THROW(to_fractional_coloring(d, 2, 2), PreconditionError);
}

TEST(FractionalColoring, BackToDistribution) {
  FractionalColoring k;
  k.entries = {{iota_set(3), Rational(1)}};
  auto d = from_fractional_coloring(k, 2, 3);
  std::map<VertexSet, Rational> m;
  for (const auto& e : d.entries()) m[e.set] = e.prob;
  EXPECT_EQ(m[VertexSet{}], Rational(1));
  EXPECT_EQ(verify_thinness(d, 3).total_mass, Rational(1));

  FractionalColoring big;
  big.entries = {{{0, 1}, q(4, 5)}, {{1, 2}, q(4, 5)}};
  EXPECT_THROW(from_fractional_coloring(big, 2, 3), PreconditionError);
  big.entries = {{{0, 1}, Rational(1)}, {{2}, q(3, 5)}};
  EXPECT_THROW(from_fractional_coloring(big, 2, 3), PreconditionError);
  big.entries = {{{0, 1}, Rational(1)}, {{1, 2}, Rational(1)}};
  EXPECT_NO_THROW(from_fractional_coloring(big, 2, 3));
}

TEST(FractionalColoring, RoundTripScaling) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int a = 2 + trial % 4;
    int n = 3 + trial % 7;
    std::vector<VertexSet> classes(static_cast<std::size_t>(a + 1));
    for (Vertex v = 0; v < n; ++v) classes[rng() % static_cast<std::size_t>(a + 1)].push_back(v);
    auto d = uniform_on_disjoint(classes, a + 1);
    auto k = to_fractional_coloring(d, a, n);
    EXPECT_EQ(k.total(), 1 + q(1, a));
    auto cov = covering(k, n);
    auto m = marginals(d, n);
    for (int v = 0; v < n; ++v) EXPECT_EQ(cov[static_cast<std::size_t>(v)], q(a + 1, a) * (1 - m[static_cast<std::size_t>(v)]));
    auto back = from_fractional_coloring(k, a + 1, n);
    auto m2 = marginals(back, n);
    for (int v = 0; v < n; ++v) EXPECT_EQ(m2[static_cast<std::size_t>(v)], m[static_cast<std::size_t>(v)]);
  }
}

TEST(ExtractBreakable, Examples) {
  auto d = uniform_on_disjoint({{0}, {1}, {2}}, 3);
  auto x = extract_breakable(d, {1, 1, 1}, 3);
  EXPECT_EQ(x.size(), 1u);
  x = extract_breakable(d, {10, 1, 1}, 3);
  EXPECT_EQ(x, VertexSet{1});
  EXPECT_EQ(extract_breakable(point({}), {1, 1}, 5), VertexSet{});
}

TEST(ExtractBreakable, AveragingBoundOnRandomWeights) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    int a = 1 + trial % 6;
    int n = 1 + trial % 10;
    std::vector<VertexSet> classes(static_cast<std::size_t>(a));
    for (Vertex v = 0; v < n; ++v) classes[rng() % static_cast<std::size_t>(a)].push_back(v);
    auto d = uniform_on_disjoint(classes, a);
    WeightFunction w;
    for (int v = 0; v < n; ++v) w.push_back(q(static_cast<long>(rng() % 100), 1 + static_cast<long>(rng() % 7)));
    auto x = extract_breakable(d, w, a);
    EXPECT_LE(weight_of(w, x) * a, total_weight(w));
  }
}
