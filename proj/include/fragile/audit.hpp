#pragma once

// Checker for decomposition outputs. It reads the serialized form and
// re-derives every claim with its own code; only the Graph container and the
// rational type are shared with the producers.

#include <optional>
#include <string>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/rational.hpp"
#include "fragile/serialize.hpp"

namespace fragile::audit {

struct Verdict {
  std::string check;
  bool ok = true;
  std::string detail;
};

struct AuditResult {
  std::vector<Verdict> verdicts;

  bool ok() const {
    for (const auto& v : verdicts) {
      if (!v.ok) return false;
    }
    return true;
  }

  const Verdict* first_failure() const {
    for (const auto& v : verdicts) {
      if (!v.ok) return &v;
    }
    return nullptr;
  }

  void add(std::string check, bool ok, std::string detail = "") { verdicts.push_back({std::move(check), ok, std::move(detail)}); }
};

/// What the producer claimed, read from the report.
struct Claim {
  std::string graph_class;
  std::string param;
  long a = 1;
  BigInt bound;
  int t = -1;
};

namespace detail {

inline bool valid_set(const VertexSet& s, int n) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n) return false;
    if (i > 0 && s[i - 1] >= s[i]) return false;
  }
  return true;
}

inline std::vector<char> membership(const VertexSet& s, int n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Vertex v : s) in[static_cast<std::size_t>(v)] = 1;
  return in;
}

inline Rational recompute_eps(const Json& node) {
  const std::string op = node.at("op").get<std::string>();
  if (op == "uniform" || op == "explicit") return parse_rational(node.at("eps").get<std::string>());
  if (!node.contains("children") || node.at("children").empty()) throw ParseError("derivation node without children");
  Rational acc = 0;
  for (const auto& c : node.at("children")) {
    Rational e = recompute_eps(c);
    if (op == "compose") acc += e;
    else if (op == "lift") acc = e > acc ? e : acc;
    else throw ParseError("unknown derivation op " + op);
  }
  return acc;
}

inline bool derivation_agrees(const Json& node) {
  if (node.contains("children")) {
    for (const auto& c : node.at("children")) {
      if (!derivation_agrees(c)) return false;
    }
  }
  return recompute_eps(node) == parse_rational(node.at("eps").get<std::string>());
}

// Returns an empty string when the parent map is a valid elimination forest
// of G - Z of depth at most `limit`.
inline std::string check_treedepth(const Graph& g, const VertexSet& z, const Json& w, const BigInt& limit) {
  const int n = g.order();
  const auto& pm = w.at("parent_map_or_bags");
  if (!pm.is_array() || static_cast<int>(pm.size()) != n) return "ancestor condition: parent map has the wrong length";
  std::vector<long long> parent;
  for (const auto& p : pm) parent.push_back(p.get<long long>());
  auto removed = membership(z, n);
  for (int v = 0; v < n; ++v) {
    long long p = parent[static_cast<std::size_t>(v)];
    if (removed[static_cast<std::size_t>(v)]) {
      if (p != -2) return "ancestor condition: deleted vertex " + std::to_string(v) + " is not marked absent";
      continue;
    }
    if (p == -1) continue;
    if (p < 0 || p >= n || removed[static_cast<std::size_t>(p)]) return "ancestor condition: vertex " + std::to_string(v) + " has an invalid parent";
  }
  // depth by walking up with a step limit to catch cycles
  std::vector<long long> depth(static_cast<std::size_t>(n), -1);
  long long deepest = 0;
  for (int v = 0; v < n; ++v) {
    if (removed[static_cast<std::size_t>(v)]) continue;
    long long d = 1;
    long long u = parent[static_cast<std::size_t>(v)];
    while (u >= 0) {
      if (++d > n) return "ancestor condition: parent map has a cycle";
      u = parent[static_cast<std::size_t>(u)];
    }
    depth[static_cast<std::size_t>(v)] = d;
    deepest = std::max(deepest, d);
  }
  auto is_anc = [&](long long anc, long long v) {
    for (long long u = parent[static_cast<std::size_t>(v)]; u >= 0; u = parent[static_cast<std::size_t>(u)]) {
      if (u == anc) return true;
    }
    return false;
  };
  for (int u = 0; u < n; ++u) {
    if (removed[static_cast<std::size_t>(u)]) continue;
    for (Vertex v : g.neighbors(u)) {
      if (v < u || removed[static_cast<std::size_t>(v)]) continue;
      if (!is_anc(u, v) && !is_anc(v, u)) return "ancestor condition fails on edge " + std::to_string(u) + " " + std::to_string(v);
    }
  }
  long long claimed = w.at("depth_or_width").get<long long>();
  if (deepest > claimed) return "treedepth witness deeper (" + std::to_string(deepest) + ") than claimed " + std::to_string(claimed);
  if (BigInt(static_cast<long>(deepest)) > limit) return "treedepth witness deeper than the bound";
  return "";
}

inline std::string check_decomposition(const Graph& g, const VertexSet& x, const Json& w, const BigInt& limit) {
  const int n = g.order();
  const auto& body = w.at("parent_map_or_bags");
  std::vector<VertexSet> bags;
  for (const auto& b : body.at("bags")) {
    VertexSet s;
    for (const auto& v : b) s.push_back(v.get<int>());
    bags.push_back(s);
  }
  std::vector<long long> parent;
  for (const auto& p : body.at("parent")) parent.push_back(p.get<long long>());
  const long long m = static_cast<long long>(bags.size());
  if (static_cast<long long>(parent.size()) != m) return "tree decomposition: bag and parent counts differ";
  auto removed = membership(x, n);
  long long width = -1;
  std::vector<std::vector<char>> in(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    const auto& b = bags[static_cast<std::size_t>(i)];
    if (!valid_set(b, n)) return "tree decomposition: bag " + std::to_string(i) + " is not a sorted set of vertices";
    for (Vertex v : b) {
      if (removed[static_cast<std::size_t>(v)]) return "tree decomposition: bag " + std::to_string(i) + " holds a deleted vertex";
    }
    in[static_cast<std::size_t>(i)] = membership(b, n);
    width = std::max(width, static_cast<long long>(b.size()) - 1);
    long long p = parent[static_cast<std::size_t>(i)];
    if (p < -1 || p >= m || p == i) return "tree decomposition: bag " + std::to_string(i) + " has an invalid parent";
    long long steps = 0;
    for (long long u = p; u >= 0; u = parent[static_cast<std::size_t>(u)]) {
      if (++steps > m) return "tree decomposition: bag parents form a cycle";
    }
  }
  for (int v = 0; v < n; ++v) {
    if (removed[static_cast<std::size_t>(v)]) continue;
    long long tops = 0;
    for (long long i = 0; i < m; ++i) {
      if (!in[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]) continue;
      long long p = parent[static_cast<std::size_t>(i)];
      if (p < 0 || !in[static_cast<std::size_t>(p)][static_cast<std::size_t>(v)]) ++tops;
    }
    if (tops != 1) return "tree decomposition: bags holding vertex " + std::to_string(v) + " are not one connected subtree";
  }
  for (int u = 0; u < n; ++u) {
    if (removed[static_cast<std::size_t>(u)]) continue;
    for (Vertex v : g.neighbors(u)) {
      if (v < u || removed[static_cast<std::size_t>(v)]) continue;
      bool covered = false;
      for (long long i = 0; i < m && !covered; ++i) covered = in[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
      if (!covered) return "tree decomposition: edge " + std::to_string(u) + " " + std::to_string(v) + " is in no bag";
    }
  }
  if (width > w.at("depth_or_width").get<long long>()) return "tree decomposition wider than claimed";
  if (BigInt(static_cast<long>(width)) > limit) return "tree decomposition wider (" + std::to_string(width) + ") than the bound";
  return "";
}

inline std::string check_components(const Graph& g, const VertexSet& x, const BigInt& limit) {
  const int n = g.order();
  auto removed = membership(x, n);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    if (removed[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
    long size = 0;
    std::vector<Vertex> queue{s};
    seen[static_cast<std::size_t>(s)] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      ++size;
      for (Vertex w : g.neighbors(queue[i])) {
        if (!removed[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          queue.push_back(w);
        }
      }
    }
    if (BigInt(size) > limit) return "component of " + std::to_string(size) + " vertices exceeds the bound";
  }
  return "";
}

inline BigInt power(long base, long exp) {
  BigInt r = 1;
  for (long i = 0; i < exp; ++i) r *= base;
  return r;
}

inline long log2_ceiling(long a) {
  long k = 0;
  while ((1L << k) < a) ++k;
  return k;
}

}  // namespace detail

/// Closed-form bound the claim must match, when one is fixed by class and
/// parameter; empty for the star pipelines.
inline std::optional<BigInt> expected_bound(const Claim& c) {
  const long a = c.a;
  if (c.param == "tw" && c.graph_class.rfind("tw:", 0) != 0) return BigInt(3 * a - 3);
  if (c.param == "td") {
    if (c.graph_class == "outerplanar") return BigInt(2 * a * (1 + detail::log2_ceiling(a)));
    if (c.graph_class == "planar-chordal") return BigInt(8 * a * a * (2 + detail::log2_ceiling(a)));
    if (c.graph_class == "planar") return BigInt(384 * a * a * a * (3 + detail::log2_ceiling(a)));
    if (c.t >= 0) return detail::power(2, static_cast<long>(c.t) * (c.t + 1) / 2 + 1) * detail::power(a, c.t);
  }
  return std::nullopt;
}

/// Re-checks a decomposition output: probability mass, thinness against 1/a,
/// the closed-form bound, and every outcome witness.
inline AuditResult audit(const Graph& g, const Json& dist, const std::vector<Json>& outcomes, const Claim& claim) {
  AuditResult r;
  const int n = g.order();
  Rational eps;
  bool is_explicit = false;
  try {
    eps = parse_rational(dist.at("eps").get<std::string>());
    is_explicit = dist.at("kind") == "explicit";
  } catch (const std::exception& e) {
    r.add("distribution format", false, e.what());
    return r;
  }
  r.add("thinness claim", eps <= make_rational(1, claim.a), "eps " + format_rational(eps) + " against 1/" + std::to_string(claim.a));
  std::vector<VertexSet> sets;
  if (is_explicit) {
    Rational mass = 0;
    bool nonneg = true;
    bool well_formed = true;
    std::vector<Rational> marginal(static_cast<std::size_t>(n), Rational(0));
    for (const auto& e : dist.at("entries")) {
      VertexSet s;
      for (const auto& v : e.at("set")) s.push_back(v.get<int>());
      Rational p = parse_rational(e.at("prob").get<std::string>());
      if (!detail::valid_set(s, n)) well_formed = false;
      if (p < 0) nonneg = false;
      mass += p;
      if (well_formed) {
        for (Vertex v : s) marginal[static_cast<std::size_t>(v)] += p;
      }
      sets.push_back(std::move(s));
    }
    r.add("support sets", well_formed, well_formed ? "" : "an entry is not a sorted set of vertices");
    r.add("probability mass", mass == 1 && nonneg, "total " + format_rational(mass) + (nonneg ? "" : ", negative entry"));
    Rational worst = 0;
    Vertex at = -1;
    for (int v = 0; v < n; ++v) {
      if (marginal[static_cast<std::size_t>(v)] > worst) {
        worst = marginal[static_cast<std::size_t>(v)];
        at = v;
      }
    }
    r.add("marginals", worst <= eps, "max " + format_rational(worst) + (at >= 0 ? " at vertex " + std::to_string(at) : ""));
    if (static_cast<std::size_t>(outcomes.size()) != sets.size()) {
      r.add("outcome coverage", false, std::to_string(outcomes.size()) + " outcome files for " + std::to_string(sets.size()) + " entries");
    }
  } else {
    bool agrees = false;
    std::string why;
    try {
      agrees = dist.contains("derivation") && detail::derivation_agrees(dist.at("derivation")) &&
               parse_rational(dist.at("derivation").at("eps").get<std::string>()) == eps;
    } catch (const std::exception& e) {
      why = e.what();
    }
    r.add("sampler derivation", agrees, why);
  }
  if (auto expect = expected_bound(claim)) {
    r.add("bound formula", *expect == claim.bound, "claimed " + claim.bound.get_str() + ", formula " + expect->get_str());
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    std::string problem;
    try {
      VertexSet z;
      for (const auto& v : o.at("set")) z.push_back(v.get<int>());
      if (!detail::valid_set(z, n)) {
        problem = "set is not a sorted set of vertices";
      } else if (is_explicit && i < sets.size() && z != sets[i]) {
        problem = "set differs from distribution entry " + std::to_string(i);
      } else {
        const auto& w = o.at("witness");
        const std::string kind = w.at("kind").get<std::string>();
        if (kind == "treedepth") problem = detail::check_treedepth(g, z, w, claim.bound);
        else if (kind == "tree-decomposition") problem = detail::check_decomposition(g, z, w, claim.bound);
        else if (kind == "components") problem = detail::check_components(g, z, claim.bound);
        else problem = "unknown witness kind " + kind;
      }
    } catch (const std::exception& e) {
      problem = std::string("malformed outcome: ") + e.what();
    }
    r.add("outcome " + std::to_string(i), problem.empty(), problem);
  }
  return r;
}

}  // namespace fragile::audit
