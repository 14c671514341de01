#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fragile/error.hpp"
#include "fragile/graph.hpp"
#include "fragile/parameters.hpp"
#include "fragile/rational.hpp"
#include "fragile/thin_dist.hpp"
#include "fragile/tree_partition.hpp"

namespace fragile {

using Json = nlohmann::ordered_json;

inline Json set_json(const VertexSet& s) {
  Json out = Json::array();
  for (Vertex v : s) out.push_back(v);
  return out;
}

inline Json derivation_json(const Derivation& d) {
  Json out{{"op", d.op}, {"eps", format_rational(d.eps)}};
  if (!d.note.empty()) out["note"] = d.note;
  if (!d.children.empty()) {
    out["children"] = Json::array();
    for (const auto& c : d.children) out["children"].push_back(derivation_json(c));
  }
  return out;
}

inline Json distribution_json(const ThinDistribution& d) {
  Json out{{"eps", format_rational(d.eps())}, {"kind", d.is_explicit() ? "explicit" : "sampler"}};
  if (d.is_explicit()) {
    out["entries"] = Json::array();
    for (const auto& e : d.entries()) out["entries"].push_back({{"set", set_json(e.set)}, {"prob", format_rational(e.prob)}});
  } else {
    out["seed"] = d.seed();
  }
  out["derivation"] = derivation_json(d.derivation());
  return out;
}

inline Json witness_json(const TreedepthWitness& w) {
  Json parent = Json::array();
  for (Vertex p : w.parent) parent.push_back(p);
  return {{"kind", "treedepth"}, {"depth_or_width", w.depth_bound}, {"parent_map_or_bags", parent}};
}

inline Json witness_json(const TreeDecompositionWitness& td) {
  Json bags = Json::array();
  for (const auto& b : td.bags) bags.push_back(set_json(b));
  Json parent = Json::array();
  for (int p : td.parent) parent.push_back(p);
  return {{"kind", "tree-decomposition"}, {"depth_or_width", td.width}, {"parent_map_or_bags", {{"bags", bags}, {"parent", parent}}}};
}

/// Components of G - X listed for a star claim.
inline Json star_witness_json(long bound, const std::vector<VertexSet>& comps) {
  Json c = Json::array();
  for (const auto& s : comps) c.push_back(set_json(s));
  return {{"kind", "components"}, {"depth_or_width", bound}, {"parent_map_or_bags", c}};
}

inline Json tree_partition_json(const RootedTreePartition& tp) {
  Json beta = Json::array();
  Json kappa = Json::array();
  Json parent = Json::array();
  Json branching = Json::array();
  for (int i = 0; i < tp.size(); ++i) {
    parent.push_back(tp.parent[static_cast<std::size_t>(i)]);
    beta.push_back(set_json(tp.beta[static_cast<std::size_t>(i)]));
    kappa.push_back(set_json(tp.kappa[static_cast<std::size_t>(i)]));
    branching.push_back(tp.branching[static_cast<std::size_t>(i)] != 0);
  }
  return {{"nodes", tp.size()}, {"parent", parent}, {"beta", beta}, {"kappa", kappa}, {"branching", branching}};
}

// Reading back. Every structural mismatch is a ParseError.

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(what + ": missing field '" + key + "'");
  return j.at(key);
}

inline Rational rational_field(const Json& j, const char* key, const std::string& what) {
  const Json& v = field(j, key, what);
  if (!v.is_string()) throw ParseError(what + ": field '" + std::string(key) + "' must be a \"p/q\" string");
  return parse_rational(v.get<std::string>());
}

inline long long int_value(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ParseError(what + ": expected an integer");
  return v.get<long long>();
}

inline VertexSet set_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected a vertex list");
  VertexSet s;
  for (const auto& v : j) s.push_back(static_cast<Vertex>(int_value(v, what)));
  return s;
}

inline Derivation derivation_from_json(const Json& j) {
  Derivation d;
  const Json& op = field(j, "op", "derivation");
  if (!op.is_string()) throw ParseError("derivation: op must be a string");
  d.op = op.get<std::string>();
  d.eps = rational_field(j, "eps", "derivation");
  if (j.contains("note") && j.at("note").is_string()) d.note = j.at("note").get<std::string>();
  if (j.contains("children")) {
    if (!j.at("children").is_array()) throw ParseError("derivation: children must be a list");
    for (const auto& c : j.at("children")) d.children.push_back(derivation_from_json(c));
  }
  return d;
}

/// Explicit distributions come back complete; sampler distributions come back
/// with their seed and derivation and a draw function that refuses to run.
inline ThinDistribution distribution_from_json(const Json& j) {
  Rational eps = rational_field(j, "eps", "distribution");
  const Json& kind = field(j, "kind", "distribution");
  Derivation der = j.contains("derivation") ? derivation_from_json(j.at("derivation")) : Derivation{"explicit", eps, "", {}};
  if (kind == "explicit") {
    std::vector<Entry> entries;
    const Json& list = field(j, "entries", "distribution");
    if (!list.is_array()) throw ParseError("distribution: entries must be a list");
    for (const auto& e : list) entries.push_back({normalized(set_from_json(field(e, "set", "entry"), "entry set")), rational_field(e, "prob", "entry")});
    auto d = ThinDistribution::explicit_dist(std::move(entries), eps);
    d.set_derivation(std::move(der));
    return d;
  }
  if (kind == "sampler") {
    const Json& seed = field(j, "seed", "distribution");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ParseError("distribution: seed must be an integer");
    der.eps = eps;
    return ThinDistribution::sampler(seed.get<std::uint64_t>(), std::move(der), [](std::uint64_t) -> VertexSet {
      throw PreconditionError("a sampler read from a file cannot draw");
    });
  }
  throw ParseError("distribution: kind must be explicit or sampler");
}

inline TreedepthWitness td_witness_from_json(const Json& j) {
  if (field(j, "kind", "witness") != "treedepth") throw ParseError("witness: expected kind treedepth");
  TreedepthWitness w;
  w.depth_bound = static_cast<int>(int_value(field(j, "depth_or_width", "witness"), "witness depth"));
  const Json& p = field(j, "parent_map_or_bags", "witness");
  if (!p.is_array()) throw ParseError("witness: parent map must be a list");
  for (const auto& v : p) w.parent.push_back(static_cast<Vertex>(int_value(v, "witness parent")));
  return w;
}

inline TreeDecompositionWitness td_decomposition_from_json(const Json& j) {
  if (field(j, "kind", "witness") != "tree-decomposition") throw ParseError("witness: expected kind tree-decomposition");
  TreeDecompositionWitness td;
  td.width = static_cast<int>(int_value(field(j, "depth_or_width", "witness"), "witness width"));
  const Json& body = field(j, "parent_map_or_bags", "witness");
  for (const auto& b : field(body, "bags", "witness")) td.bags.push_back(set_from_json(b, "witness bag"));
  for (const auto& p : field(body, "parent", "witness")) td.parent.push_back(static_cast<int>(int_value(p, "witness bag parent")));
  if (td.bags.size() != td.parent.size()) throw ParseError("witness: bag and parent counts differ");
  return td;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes through a temporary file and a rename.
inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write " + tmp.string());
    out << text;
    if (!out) throw PreconditionError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fragile
