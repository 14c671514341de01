#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fragile/audit.hpp"
#include "fragile/io.hpp"
#include "fragile/layering.hpp"
#include "fragile/parameters.hpp"
#include "fragile/plane.hpp"
#include "fragile/serialize.hpp"
#include "fragile/td_frag.hpp"
#include "fragile/tree_partition.hpp"

namespace fragile {

struct DecomposeConfig {
  std::string graph_class = "planar";  // tw:k | outerplanar | planar | planar-chordal
  Param param = Param::Tw;
  int a = 2;
  int delta = 0;  // 0: max(3, maximum degree)
  std::uint64_t seed = 0;
  int samples = 16;
  std::size_t support_threshold = 10000;
};

struct DecomposeOutput {
  Json distribution;
  std::vector<Json> outcomes;
  Json report;
  Json tree_partitions;  // null unless the star pipeline on tw:k ran
  audit::AuditResult verdicts;
};

/// k from "tw:k"; -1 for the other classes.
inline int class_treewidth(const std::string& cls) {
  if (cls.rfind("tw:", 0) != 0) {
    if (cls == "outerplanar" || cls == "planar" || cls == "planar-chordal") return -1;
    throw ParseError("unknown class '" + cls + "' (expected tw:k, outerplanar, planar or planar-chordal)");
  }
  try {
    std::size_t used = 0;
    int k = std::stoi(cls.substr(3), &used);
    if (used + 3 != cls.size() || k < 0) throw ParseError("");
    return k;
  } catch (const std::exception&) {
    throw ParseError("class '" + cls + "' needs a non-negative integer after tw:");
  }
}

namespace detail {

inline void require_embedding(const Graph& g, const std::string& cls) {
  if (!g.embedded()) throw ClassViolation("class " + cls + " needs an embedded input");
  try {
    validate_embedding(g);
  } catch (const Error& e) {
    throw ClassViolation(std::string("embedding is not planar: ") + e.what());
  }
}

inline TreeDecompositionWitness merge_certificates(const std::vector<ComponentCertificate>& certs) {
  TreeDecompositionWitness out;
  for (const auto& c : certs) {
    const int base = static_cast<int>(out.bags.size());
    for (std::size_t i = 0; i < c.td.bags.size(); ++i) {
      out.bags.push_back(c.td.bags[i]);
      out.parent.push_back(c.td.parent[i] < 0 ? -1 : c.td.parent[i] + base);
    }
    out.width = std::max(out.width, c.td.width);
  }
  return out;
}

inline Json outcome_json(std::size_t index, const VertexSet& set, const Json& witness) {
  return {{"index", index}, {"set", set_json(set)}, {"witness", witness}};
}

}  // namespace detail

/// Runs the pipeline chosen by class and parameter, serializes the result and
/// audits the serialized form.
inline DecomposeOutput run_decompose(const Graph& g, const DecomposeConfig& cfg) {
  require(cfg.a >= 1, "decompose needs a >= 1");
  require(cfg.samples >= 1, "decompose needs samples >= 1");
  const int k = class_treewidth(cfg.graph_class);
  const bool tw_class = k >= 0;
  if (!tw_class) detail::require_embedding(g, cfg.graph_class);
  const int delta = cfg.delta > 0 ? cfg.delta : std::max(3, g.max_degree());
  DecomposeOutput out;
  out.tree_partitions = Json();
  BigInt bound;
  std::string formula;
  int t = -1;
  ThinDistribution dist;
  std::vector<VertexSet> sets;
  std::vector<Json> witnesses;

  auto star_witnesses = [&](const ThinDistribution& d, long claim) {
    if (d.is_explicit()) {
      for (const auto& e : d.entries()) sets.push_back(e.set);
    } else {
      for (int i = 0; i < cfg.samples; ++i) sets.push_back(d.sample(static_cast<std::uint64_t>(i)));
    }
    for (const auto& s : sets) witnesses.push_back(star_witness_json(claim, components(remove_vertices(g, s).graph)));
  };

  switch (cfg.param) {
    case Param::Tw: {
      if (tw_class) {
        auto up = treewidth_upper(g);
        TreeDecompositionWitness td = up.witness;
        if (td.width > k) throw ClassViolation("no tree decomposition of width <= " + std::to_string(k) + " found (min-fill gives " + std::to_string(td.width) + ")");
        dist = ThinDistribution::explicit_dist({{VertexSet{}, Rational(1)}}, make_rational(1, cfg.a));
        bound = k;
        formula = "k";
        sets.push_back({});
        witnesses.push_back(witness_json(td));
      } else {
        auto lay = planar_tw_layering(g, cfg.a);
        dist = lay.dist;
        bound = lay.bound;
        formula = "3a-3";
        for (const auto& e : dist.entries()) {
          std::size_t cls = 0;
          while (lay.classes[cls] != e.set) ++cls;
          sets.push_back(e.set);
          witnesses.push_back(witness_json(detail::merge_certificates(lay.certificates[cls])));
        }
      }
      break;
    }
    case Param::Star: {
      if (tw_class) {
        auto sf = star_fragile_tw(g, k + 1, delta, cfg.a);
        dist = sf.dist;
        bound = sf.bound;
        formula = "floor(12k(D-1)^a((D-1)^(b-1)+6^(a/b))) with k=" + std::to_string(k + 1) + ", D=" + std::to_string(delta) + ", b=" + std::to_string(sf.b);
        out.tree_partitions = Json::array();
        for (const auto& tp : sf.partitions) out.tree_partitions.push_back(tree_partition_json(tp));
      } else {
        auto sp = star_fragile_planar(g, delta, cfg.a, cfg.seed, cfg.support_threshold);
        dist = sp.dist;
        bound = sp.bound;
        formula = "goodtp bound at a''=a+1 with k=3a'-2, a'=" + std::to_string(sp.outer_a) + ", D=" + std::to_string(delta) + ", b=" + std::to_string(sp.b);
      }
      star_witnesses(dist, bound.get_si());
      break;
    }
    case Param::Td: {
      TdFragility fr;
      if (tw_class) fr = td_frag_tw(g, cfg.a, cfg.seed, k);
      else if (cfg.graph_class == "outerplanar") fr = td_frag_outerplanar(g, cfg.a, cfg.seed);
      else if (cfg.graph_class == "planar-chordal") fr = td_frag_planar_chordal(g, cfg.a, cfg.seed);
      else fr = td_frag_planar(g, cfg.a, cfg.seed);
      dist = fr.dist;
      bound = fr.bound;
      formula = fr.bound_formula;
      t = fr.t_used;
      for (int i = 0; i < cfg.samples; ++i) {
        auto o = fr.outcome(static_cast<std::uint64_t>(i));
        sets.push_back(o.z);
        witnesses.push_back(witness_json(o.witness));
      }
      break;
    }
  }

  out.distribution = distribution_json(dist);
  Json files = Json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out.outcomes.push_back(detail::outcome_json(i, sets[i], witnesses[i]));
    char name[40];
    std::snprintf(name, sizeof name, "outcomes/outcome_%05zu.json", i);
    files.push_back(name);
  }
  audit::Claim claim{cfg.graph_class, param_name(cfg.param), cfg.a, bound, t};
  out.verdicts = audit::audit(g, out.distribution, out.outcomes, claim);

  Json certificate{{"eps", format_rational(dist.eps())}, {"one_over_a", format_rational(make_rational(1, cfg.a))}};
  if (dist.is_explicit()) {
    auto rep = verify_thinness(dist, g.order());
    certificate["total_mass"] = format_rational(rep.total_mass);
    certificate["max_marginal"] = format_rational(rep.max_marginal);
  } else {
    certificate["derivation_eps"] = format_rational(derived_eps(dist.derivation()));
  }
  Json verdicts = Json::array();
  for (const auto& v : out.verdicts.verdicts) {
    Json j{{"check", v.check}, {"ok", v.ok}};
    if (!v.detail.empty()) j["detail"] = v.detail;
    verdicts.push_back(j);
  }
  out.report = Json{{"class", cfg.graph_class},
                    {"param", param_name(cfg.param)},
                    {"a", cfg.a},
                    {"seed", cfg.seed},
                    {"n", g.order()},
                    {"bound_formula", formula},
                    {"bound_value", bound.get_str()},
                    {"thinness_certificate", certificate},
                    {"outcomes_sampled", sets.size()},
                    {"witness_files", files},
                    {"verifier_verdicts", verdicts}};
  if (t >= 0) out.report["t"] = t;
  return out;
}

/// Layout: graph.txt, distribution.json, report.json, outcomes/*.json and,
/// for the star pipeline on tw:k, tree_partitions.json.
inline void write_decompose(const std::filesystem::path& dir, const Graph& g, const DecomposeOutput& out) {
  std::filesystem::create_directories(dir / "outcomes");
  write_text(dir / "graph.txt", write_graph(g));
  write_text(dir / "distribution.json", dump(out.distribution));
  for (std::size_t i = 0; i < out.outcomes.size(); ++i) write_text(dir / out.report["witness_files"][i].get<std::string>(), dump(out.outcomes[i]));
  if (!out.tree_partitions.is_null()) write_text(dir / "tree_partitions.json", dump(out.tree_partitions));
  write_text(dir / "report.json", dump(out.report));
}

/// Reads a directory written by write_decompose and audits it.
inline audit::AuditResult verify_directory(const std::filesystem::path& dir) {
  Graph g = parse_graph(read_text(dir / "graph.txt"));
  Json report = parse_json(read_text(dir / "report.json"), "report.json");
  Json dist = parse_json(read_text(dir / "distribution.json"), "distribution.json");
  audit::Claim claim;
  try {
    claim.graph_class = report.at("class").get<std::string>();
    claim.param = report.at("param").get<std::string>();
    claim.a = report.at("a").get<long>();
    claim.bound = parse_bigint(report.at("bound_value").get<std::string>());
    if (report.contains("t")) claim.t = report.at("t").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report.json: ") + e.what());
  }
  if (claim.a < 1) throw ParseError("report.json: a must be positive");
  std::vector<Json> outcomes;
  for (const auto& f : field(report, "witness_files", "report.json")) {
    const std::string name = f.get<std::string>();
    outcomes.push_back(parse_json(read_text(dir / name), name));
  }
  return audit::audit(g, dist, outcomes, claim);
}

}  // namespace fragile
