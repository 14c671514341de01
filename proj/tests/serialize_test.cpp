#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fragile/generators.hpp"
#include "fragile/pipeline.hpp"
#include "fragile/serialize.hpp"
#include "oracles.hpp"

using namespace fragile;

namespace {

DecomposeConfig config(const std::string& cls, Param p, int a, std::uint64_t seed = 1) {
  DecomposeConfig c;
  c.graph_class = cls;
  c.param = p;
  c.a = a;
  c.seed = seed;
  c.samples = 6;
  return c;
}

std::vector<Json> outcomes_of(const DecomposeOutput& out) { return out.outcomes; }

audit::Claim claim_of(const DecomposeOutput& out) {
  audit::Claim c;
  c.graph_class = out.report["class"];
  c.param = out.report["param"];
  c.a = out.report["a"];
  c.bound = parse_bigint(out.report["bound_value"].get<std::string>());
  if (out.report.contains("t")) c.t = out.report["t"];
  return c;
}

std::string failure(const audit::AuditResult& r) {
  auto* f = r.first_failure();
  return f == nullptr ? "" : f->check + ": " + f->detail;
}

}  // namespace

TEST(Serialize, DistributionRoundTrip) {
  auto d = uniform_on_disjoint({{0, 2}, {1}, {}}, 3);
  Json j = distribution_json(d);
  EXPECT_EQ(j["eps"], "1/3");
  EXPECT_EQ(j["kind"], "explicit");
  auto back = distribution_from_json(parse_json(j.dump(), "test"));
  EXPECT_EQ(back.entries(), d.entries());
  EXPECT_EQ(back.eps(), d.eps());
  EXPECT_EQ(back.derivation().op, "uniform");
}

TEST(Serialize, SamplerKeepsSeedAndDerivation) {
  Derivation der{"compose", make_rational(1, 2), "", {{"uniform", make_rational(1, 4), "x", {}}, {"uniform", make_rational(1, 4), "y", {}}}};
  auto d = ThinDistribution::sampler(77, der, [](std::uint64_t) { return VertexSet{}; });
  auto back = distribution_from_json(distribution_json(d));
  EXPECT_FALSE(back.is_explicit());
  EXPECT_EQ(back.seed(), 77u);
  EXPECT_EQ(derived_eps(back.derivation()), make_rational(1, 2));
  EXPECT_THROW(back.sample(0), PreconditionError);
}

TEST(Serialize, WitnessRoundTrip) {
  TreedepthWitness w{{-1, 0, 1, TreedepthWitness::kAbsent}, 3};
  auto back = td_witness_from_json(witness_json(w));
  EXPECT_EQ(back.parent, w.parent);
  EXPECT_EQ(back.depth_bound, 3);
  TreeDecompositionWitness td{{{0, 1}, {1, 2}}, {-1, 0}, 1};
  auto tdb = td_decomposition_from_json(witness_json(td));
  EXPECT_EQ(tdb.bags, td.bags);
  EXPECT_EQ(tdb.parent, td.parent);
  EXPECT_THROW(td_witness_from_json(witness_json(td)), ParseError);
}

TEST(Serialize, MalformedInput) {
  EXPECT_THROW(parse_json("{", "x"), ParseError);
  EXPECT_THROW(distribution_from_json(Json{{"kind", "explicit"}}), ParseError);
  EXPECT_THROW(distribution_from_json(Json{{"eps", "1/2"}, {"kind", "other"}}), ParseError);
  EXPECT_THROW(distribution_from_json(Json{{"eps", 0.5}, {"kind", "explicit"}}), ParseError);
}

TEST(Serialize, TreePartitionFields) {
  RootedTreePartition tp;
  tp.add_node(-1, {0, 1}, {0});
  tp.beta[0] = {0, 1};
  Json j = tree_partition_json(tp);
  EXPECT_EQ(j["nodes"], 1);
  EXPECT_EQ(j["parent"][0], -1);
  EXPECT_EQ(j["beta"][0], Json::array({0, 1}));
  EXPECT_EQ(j["branching"][0], false);
}

TEST(Pipeline, PlanarTreewidthOnGrid) {
  auto out = run_decompose(gen::grid(5, 5), config("planar", Param::Tw, 2));
  EXPECT_EQ(out.report["bound_value"], "3");
  EXPECT_TRUE(out.verdicts.ok()) << failure(out.verdicts);
  EXPECT_EQ(out.report["outcomes_sampled"], 2);
}

TEST(Pipeline, OuterplanarTreedepthOnFan) {
  auto out = run_decompose(gen::fan(9), config("outerplanar", Param::Td, 2));
  EXPECT_EQ(out.report["bound_value"], "8");
  EXPECT_TRUE(out.verdicts.ok()) << failure(out.verdicts);
  EXPECT_THROW(run_decompose(gen::k4_embedded(), config("outerplanar", Param::Td, 2)), ClassViolation);
}

TEST(Pipeline, EveryClassAndParameter) {
  std::mt19937_64 rng(3);
  std::vector<std::pair<Graph, std::vector<std::string>>> cases{
      {gen::grid(4, 4), {"planar", "tw:4"}},
      {gen::fan(8), {"outerplanar", "planar", "tw:2"}},
      {gen::stacked_triangulation(rng, 12), {"planar-chordal", "planar", "tw:3"}},
      {gen::random_tree(rng, 30, 3), {"outerplanar", "planar-chordal", "tw:1"}},
  };
  for (const auto& [g, classes] : cases) {
    for (const auto& cls : classes) {
      for (Param p : {Param::Tw, Param::Star, Param::Td}) {
        if (p == Param::Star && g.max_degree() > 4 && cls.rfind("tw:", 0) != 0) continue;
        for (int a : {1, 3}) {
          auto out = run_decompose(g, config(cls, p, a));
          EXPECT_TRUE(out.verdicts.ok()) << cls << " " << param_name(p) << " a=" << a << " " << failure(out.verdicts);
        }
      }
    }
  }
}

TEST(Pipeline, NonEmbeddedPlanarClassIsAViolation) {
  EXPECT_THROW(run_decompose(oracle::path(5), config("planar", Param::Tw, 2)), ClassViolation);
  EXPECT_THROW(run_decompose(oracle::clique(5), config("tw:2", Param::Tw, 2)), ClassViolation);
  EXPECT_THROW(run_decompose(gen::grid(3, 3), config("tw:x", Param::Tw, 2)), ParseError);
  EXPECT_THROW(run_decompose(gen::grid(3, 3), config("bogus", Param::Tw, 2)), ParseError);
}

TEST(Pipeline, Deterministic) {
  std::mt19937_64 rng(8);
  auto g = gen::random_triangulation(rng, 20, 10);
  for (Param p : {Param::Tw, Param::Td}) {
    auto x = run_decompose(g, config("planar", p, 2, 42));
    auto y = run_decompose(g, config("planar", p, 2, 42));
    EXPECT_EQ(dump(x.distribution), dump(y.distribution));
    EXPECT_EQ(dump(x.report), dump(y.report));
    for (std::size_t i = 0; i < x.outcomes.size(); ++i) EXPECT_EQ(dump(x.outcomes[i]), dump(y.outcomes[i]));
  }
}

TEST(Audit, DetectsTamperedMass) {
  auto out = run_decompose(gen::grid(4, 4), config("planar", Param::Tw, 2));
  Json dist = out.distribution;
  dist["entries"][0]["prob"] = "1/3";
  auto r = audit::audit(gen::grid(4, 4), dist, outcomes_of(out), claim_of(out));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.first_failure()->check, "probability mass");
}

TEST(Audit, DetectsThinnessViolation) {
  auto g = gen::grid(3, 3);
  auto out = run_decompose(g, config("planar", Param::Tw, 2));
  Json dist = out.distribution;
  dist["eps"] = "1/4";
  EXPECT_FALSE(audit::audit(g, dist, outcomes_of(out), claim_of(out)).ok());
  auto claim = claim_of(out);
  claim.a = 3;
  EXPECT_FALSE(audit::audit(g, out.distribution, outcomes_of(out), claim).ok());
}

TEST(Audit, DetectsTamperedTreedepthWitness) {
  auto g = gen::fan(9);
  auto out = run_decompose(g, config("outerplanar", Param::Td, 2));
  auto outcomes = outcomes_of(out);
  // make the first present vertex a root with everything else detached
  auto& pm = outcomes[0]["witness"]["parent_map_or_bags"];
  for (auto& p : pm) {
    if (p != -2) p = -1;
  }
  auto r = audit::audit(g, out.distribution, outcomes, claim_of(out));
  ASSERT_FALSE(r.ok());
  EXPECT_NE(failure(r).find("ancestor condition"), std::string::npos) << failure(r);
}

TEST(Audit, DetectsWrongBoundAndBadDecomposition) {
  auto g = gen::grid(4, 4);
  auto out = run_decompose(g, config("planar", Param::Tw, 2));
  auto claim = claim_of(out);
  claim.bound = 2;
  EXPECT_FALSE(audit::audit(g, out.distribution, outcomes_of(out), claim).ok());
  auto outcomes = outcomes_of(out);
  outcomes[0]["witness"]["parent_map_or_bags"]["bags"][0] = Json::array();
  EXPECT_FALSE(audit::audit(g, out.distribution, outcomes, claim_of(out)).ok());
  outcomes = outcomes_of(out);
  outcomes.pop_back();
  EXPECT_FALSE(audit::audit(g, out.distribution, outcomes, claim_of(out)).ok());
}

TEST(Audit, StarComponentsRecomputed) {
  auto g = oracle::path(6);
  Json dist = distribution_json(ThinDistribution::explicit_dist({{VertexSet{2}, Rational(1)}}, Rational(1)));
  std::vector<Json> outs{{{"set", {2}}, {"witness", star_witness_json(3, {})}}};
  audit::Claim c{"tw:1", "star", 1, BigInt(3), -1};
  EXPECT_TRUE(audit::audit(g, dist, outs, c).ok());
  c.bound = 2;
  EXPECT_FALSE(audit::audit(g, dist, outs, c).ok());
}

TEST(Pipeline, DirectoryRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "fragile_serialize_test";
  std::filesystem::remove_all(dir);
  auto g = gen::fan(7);
  auto out = run_decompose(g, config("tw:2", Param::Star, 2));
  write_decompose(dir, g, out);
  EXPECT_TRUE(std::filesystem::exists(dir / "tree_partitions.json"));
  auto r = verify_directory(dir);
  EXPECT_TRUE(r.ok()) << failure(r);
  std::filesystem::remove_all(dir);
}
