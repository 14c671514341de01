#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/io.hpp"
#include "fragile/rational.hpp"

namespace fragile {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for draw `index` under `seed`.
inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) { return std::mt19937_64(splitmix64(seed ^ splitmix64(index))); }

/// Composition tree recording how a sampler's marginal bound arose.
///   uniform / explicit : leaf, eps given
///   compose            : independent union, eps = sum of children
///   lift               : independent draws on pairwise disjoint vertex sets,
///                        eps = max of children
struct Derivation {
  std::string op;
  Rational eps;
  std::string note;
  std::vector<Derivation> children;
};

/// Recomputes the bound implied by the tree; throws on an unknown op.
inline Rational derived_eps(const Derivation& d) {
  if (d.op == "uniform" || d.op == "explicit") return d.eps;
  if (d.children.empty()) throw VerificationError("derivation node '" + d.op + "' has no children");
  Rational acc = 0;
  for (const auto& c : d.children) {
    Rational e = derived_eps(c);
    if (d.op == "compose") {
      acc += e;
    } else if (d.op == "lift") {
      if (e > acc) acc = e;
    } else {
      throw VerificationError("unknown derivation op '" + d.op + "'");
    }
  }
  return acc;
}

/// True when every recorded eps equals the value recomputed from its children.
inline bool derivation_consistent(const Derivation& d) {
  for (const auto& c : d.children) {
    if (!derivation_consistent(c)) return false;
  }
  return derived_eps(d) == d.eps;
}

struct Entry {
  VertexSet set;
  Rational prob;
  bool operator==(const Entry&) const = default;
};

/// Probability distribution over vertex subsets with a claimed thinness.
class ThinDistribution {
 public:
  using Draw = std::function<VertexSet(std::uint64_t index)>;

  static ThinDistribution explicit_dist(std::vector<Entry> entries, Rational eps) {
    ThinDistribution d;
    std::map<VertexSet, Rational> merged;
    for (auto& e : entries) merged[e.set] += e.prob;
    for (auto& [s, p] : merged) {
      if (p != 0) d.entries_.push_back({s, p});
    }
    d.eps_ = std::move(eps);
    d.derivation_ = Derivation{"explicit", d.eps_, "", {}};
    return d;
  }

  static ThinDistribution sampler(std::uint64_t seed, Derivation derivation, Draw draw) {
    ThinDistribution d;
    d.is_explicit_ = false;
    d.seed_ = seed;
    d.eps_ = derivation.eps;
    d.derivation_ = std::move(derivation);
    d.draw_ = std::move(draw);
    return d;
  }

  bool is_explicit() const { return is_explicit_; }
  const Rational& eps() const { return eps_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t seed() const { return seed_; }
  const Derivation& derivation() const { return derivation_; }
  void set_derivation(Derivation d) { derivation_ = std::move(d); }

  /// Deterministic draw number `index`.
  VertexSet sample(std::uint64_t index, std::uint64_t seed_override = 0) const {
    if (!is_explicit_) return draw_(index);
    auto rng = rng_for(seed_override, index);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0;
    for (const auto& e : entries_) {
      acc += e.prob.get_d();
      if (u < acc) return e.set;
    }
    return entries_.back().set;
  }

 private:
  bool is_explicit_ = true;
  std::vector<Entry> entries_;
  Rational eps_;
  std::uint64_t seed_ = 0;
  Derivation derivation_;
  Draw draw_;
};

/// Uniform distribution on a pairwise disjoint sets: 1/a for each non-empty
/// one, t/a for the empty set when t of them are empty.
inline ThinDistribution uniform_on_disjoint(const std::vector<VertexSet>& sets, int a) {
  require(a >= 1, "uniform_on_disjoint needs a >= 1");
  if (static_cast<int>(sets.size()) != a) {
    throw PreconditionError("uniform_on_disjoint: expected " + std::to_string(a) + " sets, got " + std::to_string(sets.size()));
  }
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    require(is_normalized(sets[i]), "uniform_on_disjoint: sets must be sorted");
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (!disjoint(sets[i], sets[j])) throw PreconditionError("uniform_on_disjoint: sets overlap");
    }
    entries.push_back({sets[i], make_rational(1, a)});
  }
  auto d = ThinDistribution::explicit_dist(std::move(entries), make_rational(1, a));
  d.set_derivation(Derivation{"uniform", make_rational(1, a), "", {}});
  return d;
}

struct ThinnessReport {
  Rational total_mass;
  Rational max_marginal;
  Vertex worst_vertex = -1;
  bool mass_ok = false;
  bool nonnegative = true;
  bool within(const Rational& eps) const { return mass_ok && nonnegative && max_marginal <= eps; }
};

/// Exact per-vertex marginals of an explicit distribution over n vertices.
inline std::vector<Rational> marginals(const ThinDistribution& d, int n) {
  require(d.is_explicit(), "marginals need an explicit distribution");
  std::vector<Rational> m(static_cast<std::size_t>(n), Rational(0));
  for (const auto& e : d.entries()) {
    for (Vertex v : e.set) {
      require(v >= 0 && v < n, "support set vertex out of range");
      m[static_cast<std::size_t>(v)] += e.prob;
    }
  }
  return m;
}

inline ThinnessReport verify_thinness(const ThinDistribution& d, int n) {
  ThinnessReport r;
  for (const auto& e : d.entries()) {
    r.total_mass += e.prob;
    if (e.prob < 0) r.nonnegative = false;
  }
  r.mass_ok = r.total_mass == 1;
  auto m = marginals(d, n);
  for (Vertex v = 0; v < n; ++v) {
    if (r.worst_vertex < 0 || m[static_cast<std::size_t>(v)] > r.max_marginal) {
      r.max_marginal = m[static_cast<std::size_t>(v)];
      r.worst_vertex = v;
    }
  }
  return r;
}

using DistributionFamily = std::map<VertexSet, ThinDistribution>;

/// Z = X u Y with X from d1 and Y from family[X], drawn independently. The
/// bound is eps(d1) + max eps over the family. Explicit when everything is
/// explicit and the product support has at most `threshold` pairs.
inline ThinDistribution compose(const ThinDistribution& d1, const DistributionFamily& family, std::uint64_t seed = 0,
                                std::size_t threshold = 10000) {
  require(d1.is_explicit(), "compose needs an explicit outer distribution");
  Rational eps2 = 0;
  bool all_explicit = true;
  std::size_t pairs = 0;
  std::vector<Derivation> inner;
  for (const auto& e : d1.entries()) {
    auto it = family.find(e.set);
    if (it == family.end()) throw PreconditionError("compose: family has no distribution for a support set of the outer distribution");
    if (it->second.eps() > eps2) eps2 = it->second.eps();
    all_explicit = all_explicit && it->second.is_explicit();
    pairs += it->second.is_explicit() ? it->second.entries().size() : 0;
  }
  for (const auto& e : d1.entries()) inner.push_back(family.at(e.set).derivation());
  Derivation lifted{"lift", eps2, "per outer outcome", std::move(inner)};
  Derivation der{"compose", d1.eps() + eps2, "", {d1.derivation(), std::move(lifted)}};
  if (all_explicit && pairs <= threshold) {
    std::vector<Entry> out;
    for (const auto& e : d1.entries()) {
      for (const auto& f : family.at(e.set).entries()) out.push_back({set_union(e.set, f.set), e.prob * f.prob});
    }
    auto d = ThinDistribution::explicit_dist(std::move(out), d1.eps() + eps2);
    d.set_derivation(std::move(der));
    return d;
  }
  auto outer = std::make_shared<ThinDistribution>(d1);
  auto fam = std::make_shared<DistributionFamily>(family);
  return ThinDistribution::sampler(seed, std::move(der), [outer, fam, seed](std::uint64_t index) {
    VertexSet x = outer->sample(index, seed);
    VertexSet y = fam->at(x).sample(index, splitmix64(seed + 1));
    return set_union(x, y);
  });
}

struct FractionalColoring {
  std::vector<Entry> entries;  // (Y, kappa(Y))
  long bound = 0;              // f(G[Y]) <= bound for listed sets

  Rational total() const {
    Rational s = 0;
    for (const auto& e : entries) s += e.prob;
    return s;
  }
};

inline std::vector<Rational> covering(const FractionalColoring& k, int n) {
  std::vector<Rational> c(static_cast<std::size_t>(n), Rational(0));
  for (const auto& e : k.entries) {
    for (Vertex v : e.set) c[static_cast<std::size_t>(v)] += e.prob;
  }
  return c;
}

/// kappa(V \ X) = (a+1)/a * Pr(X) for a 1/(a+1)-thin explicit distribution.
inline FractionalColoring to_fractional_coloring(const ThinDistribution& d, int a, int n, long bound = 0) {
  require(a >= 1, "to_fractional_coloring needs a >= 1");
  auto rep = verify_thinness(d, n);
  if (!rep.within(make_rational(1, a + 1))) {
    throw PreconditionError("to_fractional_coloring: distribution is not 1/" + std::to_string(a + 1) + "-thin (max marginal " +
                            format_rational(rep.max_marginal) + ")");
  }
  std::map<VertexSet, Rational> kappa;
  Rational scale = make_rational(a + 1, a);
  for (const auto& e : d.entries()) kappa[complement(n, e.set)] += scale * e.prob;
  FractionalColoring out;
  out.bound = bound;
  for (auto& [s, w] : kappa) out.entries.push_back({s, w});
  for (const auto& c : covering(out, n)) {
    if (c < 1) throw VerificationError("to_fractional_coloring: covering below 1");
  }
  return out;
}

/// Pr(V \ Y) = (a-1)/a * kappa(Y); leftover mass goes to the empty set.
/// For a = 1 the result is the point mass on V.
inline ThinDistribution from_fractional_coloring(const FractionalColoring& k, int a, int n) {
  require(a >= 1, "from_fractional_coloring needs a >= 1");
  if (a == 1) return ThinDistribution::explicit_dist({{iota_set(n), Rational(1)}}, Rational(1));
  Rational limit = 1 + make_rational(1, a - 1);
  if (k.total() > limit) {
    throw PreconditionError("from_fractional_coloring: |kappa| = " + format_rational(k.total()) + " exceeds " + format_rational(limit));
  }
  for (const auto& c : covering(k, n)) {
    if (c < 1) throw PreconditionError("from_fractional_coloring: covering below 1");
  }
  Rational scale = make_rational(a - 1, a);
  std::vector<Entry> entries;
  Rational used = 0;
  for (const auto& e : k.entries) {
    entries.push_back({complement(n, e.set), scale * e.prob});
    used += scale * e.prob;
  }
  if (used < 1) entries.push_back({VertexSet{}, 1 - used});
  auto d = ThinDistribution::explicit_dist(std::move(entries), make_rational(1, a));
  auto rep = verify_thinness(d, n);
  if (!rep.within(make_rational(1, a))) throw VerificationError("from_fractional_coloring: result is not 1/a-thin");
  return d;
}

/// A support set of minimum weight (first in support order on ties).
inline VertexSet extract_breakable(const ThinDistribution& d, const WeightFunction& w) {
  require(d.is_explicit() && !d.entries().empty(), "extract_breakable needs a non-empty explicit distribution");
  const VertexSet* best = nullptr;
  Rational best_w;
  for (const auto& e : d.entries()) {
    Rational x = weight_of(w, e.set);
    if (best == nullptr || x < best_w) {
      best = &e.set;
      best_w = x;
    }
  }
  return *best;
}

}  // namespace fragile

namespace fragile {

/// Same, additionally checking the averaging guarantee w(X) <= w(V)/a.
inline VertexSet extract_breakable(const ThinDistribution& d, const WeightFunction& w, int a) {
  VertexSet x = extract_breakable(d, w);
  if (weight_of(w, x) * a > total_weight(w)) throw VerificationError("extract_breakable: averaging bound violated; distribution is not 1/a-thin");
  return x;
}

}  // namespace fragile
