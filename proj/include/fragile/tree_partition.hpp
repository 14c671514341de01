#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/layering.hpp"
#include "fragile/parameters.hpp"
#include "fragile/rational.hpp"
#include "fragile/separators.hpp"
#include "fragile/thin_dist.hpp"

namespace fragile {

/// Rooted tree partition; node 0 is the root and parents precede children.
struct RootedTreePartition {
  std::vector<int> parent;
  std::vector<VertexSet> beta;
  std::vector<VertexSet> sigma;
  std::vector<VertexSet> gamma;
  std::vector<VertexSet> kappa;
  std::vector<char> branching;
  std::vector<int> depth;
  long k = 0;
  int delta = 0;
  int b = 1;

  int size() const { return static_cast<int>(parent.size()); }

  int add_node(int par, VertexSet sig, VertexSet gam) {
    parent.push_back(par);
    beta.emplace_back();
    sigma.push_back(std::move(sig));
    gamma.push_back(std::move(gam));
    kappa.emplace_back();
    branching.push_back(0);
    depth.push_back(par < 0 ? 0 : depth[static_cast<std::size_t>(par)] + 1);
    return size() - 1;
  }
};

namespace detail {

inline VertexSet touching(const Graph& g, const VertexSet& from, const VertexSet& target) {
  VertexSet out;
  for (Vertex v : from) {
    for (Vertex w : g.neighbors(v)) {
      if (contains(target, w)) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Independent check of the partition invariants; empty string when valid.
inline std::string tree_partition_problem(const Graph& g, const RootedTreePartition& tp) {
  const int n = g.order();
  const int t = tp.size();
  if (t == 0) return n == 0 ? "" : "no nodes";
  std::vector<int> node_of(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < t; ++x) {
    int p = tp.parent[static_cast<std::size_t>(x)];
    if ((x == 0) != (p < 0) || p >= x) return "parent order broken at node " + std::to_string(x);
    for (Vertex v : tp.beta[static_cast<std::size_t>(x)]) {
      if (v < 0 || v >= n) return "bag vertex out of range";
      if (node_of[static_cast<std::size_t>(v)] >= 0) return "bags overlap at vertex " + std::to_string(v);
      node_of[static_cast<std::size_t>(v)] = x;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (node_of[static_cast<std::size_t>(v)] < 0) return "vertex " + std::to_string(v) + " in no bag";
  }
  for (auto [u, v] : g.edges()) {
    int x = node_of[static_cast<std::size_t>(u)];
    int y = node_of[static_cast<std::size_t>(v)];
    if (x != y && tp.parent[static_cast<std::size_t>(x)] != y && tp.parent[static_cast<std::size_t>(y)] != x) {
      return "edge " + std::to_string(u) + "-" + std::to_string(v) + " joins non-adjacent nodes";
    }
  }
  if (tp.delta < 3) return {};
  const long s = 12 * tp.k;
  BigInt limit = pow_big(tp.delta - 1, static_cast<unsigned long>(tp.b - 1)) * s;
  BigInt p = pow_big(tp.delta - 1, static_cast<unsigned long>(tp.b));
  std::vector<VertexSet> below(static_cast<std::size_t>(t));
  std::vector<int> children(static_cast<std::size_t>(t), 0);
  for (int x = t - 1; x >= 0; --x) {
    below[static_cast<std::size_t>(x)] = set_union(below[static_cast<std::size_t>(x)], tp.beta[static_cast<std::size_t>(x)]);
    int par = tp.parent[static_cast<std::size_t>(x)];
    if (par >= 0) {
      below[static_cast<std::size_t>(par)] = set_union(below[static_cast<std::size_t>(par)], below[static_cast<std::size_t>(x)]);
      ++children[static_cast<std::size_t>(par)];
    }
  }
  for (int x = 1; x < t; ++x) {
    const auto& gam = tp.gamma[static_cast<std::size_t>(x)];
    if (tp.sigma[static_cast<std::size_t>(x)] != below[static_cast<std::size_t>(x)]) return "sigma differs from the bags below node " + std::to_string(x);
    if (BigInt(static_cast<unsigned long>(gam.size())) > limit) return "boundary too large at node " + std::to_string(x);
    for (Vertex v : gam) {
      if (set_intersection(g.neighbors(v), below[static_cast<std::size_t>(x)]).size() > static_cast<std::size_t>(tp.delta - 1)) {
        return "boundary vertex with more than delta-1 neighbours below node " + std::to_string(x);
      }
    }
  }
  for (int x = 0; x < t; ++x) {
    if (!tp.branching[static_cast<std::size_t>(x)]) continue;
    if (BigInt(children[static_cast<std::size_t>(x)]) >= 6 * p) return "branching node with too many children";
    if (BigInt(static_cast<unsigned long>(tp.kappa[static_cast<std::size_t>(x)].size())) >= 6 * p * tp.k) return "branching core too large";
    for (int y = tp.parent[static_cast<std::size_t>(x)]; y >= 0; y = tp.parent[static_cast<std::size_t>(y)]) {
      if (tp.branching[static_cast<std::size_t>(y)] && tp.depth[static_cast<std::size_t>(x)] - tp.depth[static_cast<std::size_t>(y)] < tp.b) {
        return "branching nodes closer than b";
      }
    }
  }
  return {};
}

/// Peeling/branching construction on a connected graph with a decomposition
/// of width < k and maximum degree at most delta.
inline RootedTreePartition build_goodtp(const Graph& g, const TreeDecompositionWitness& td, long k, int delta, int a, int b) {
  require(k >= 1, "build_goodtp needs k >= 1");
  require(delta >= 3, "build_goodtp needs delta >= 3");
  require(b >= 1 && b <= a, "build_goodtp needs 1 <= b <= a");
  if (!is_connected(g)) throw PreconditionError("build_goodtp needs a connected graph");
  if (g.max_degree() > delta) throw PreconditionError("maximum degree " + std::to_string(g.max_degree()) + " exceeds delta " + std::to_string(delta));
  auto problem = tree_decomposition_problem(g, td);
  if (!problem.empty()) throw PreconditionError("build_goodtp: invalid tree decomposition: " + problem);
  if (td.width >= k) throw PreconditionError("build_goodtp needs a decomposition of width < k");
  RootedTreePartition tp;
  tp.k = k;
  tp.delta = delta;
  tp.b = b;
  const int n = g.order();
  if (n < 3) {
    tp.add_node(-1, iota_set(n), {});
    tp.beta[0] = iota_set(n);
    return tp;
  }
  const long s = 12 * k;
  BigInt peel_limit = pow_big(delta - 1, static_cast<unsigned long>(b - 1)) * s;
  BigInt p_big = pow_big(delta - 1, static_cast<unsigned long>(b));
  require(p_big.fits_slong_p(), "build_goodtp: (delta-1)^b too large");
  const long p = p_big.get_si();

  auto edges = g.edges();
  VertexSet root_bag{edges.front().first, edges.front().second};
  tp.add_node(-1, iota_set(n), {});
  tp.beta[0] = root_bag;
  tp.add_node(0, set_difference(iota_set(n), root_bag), root_bag);

  for (int x = 1; x < tp.size(); ++x) {
    const VertexSet sig = tp.sigma[static_cast<std::size_t>(x)];
    const VertexSet w = detail::touching(g, sig, tp.gamma[static_cast<std::size_t>(x)]);
    if (BigInt(static_cast<unsigned long>(w.size())) <= peel_limit) {
      tp.beta[static_cast<std::size_t>(x)] = w;
      VertexSet rest = set_difference(sig, w);
      if (!rest.empty()) tp.add_node(x, std::move(rest), w);
      continue;
    }
    auto sub = induced_subgraph(g, sig);
    VertexSet w_local;
    for (Vertex v : w) w_local.push_back(sub.local(v));
    auto split = iterated_split(sub.graph, restrict_decomposition(td, sub), w_local, s, p, k);
    auto norm = normalize_split(split, sub.graph, w_local);
    auto bad = split_problem(sub.graph, w_local, norm);
    if (!bad.empty()) throw VerificationError("build_goodtp: split invariant failed: " + bad);
    VertexSet core = sub.lift(norm.c);
    VertexSet wc = set_union(w, core);
    tp.branching[static_cast<std::size_t>(x)] = 1;
    tp.kappa[static_cast<std::size_t>(x)] = core;
    tp.beta[static_cast<std::size_t>(x)] = wc;
    for (const auto& part : norm.parts) {
      VertexSet e = sub.lift(part);
      VertexSet gam = detail::touching(g, wc, e);
      tp.add_node(x, std::move(e), std::move(gam));
    }
  }
  auto bad = tree_partition_problem(g, tp);
  if (!bad.empty()) throw VerificationError("build_goodtp: " + bad);
  return tp;
}

/// Maximum of |beta(S)| over subtrees S of depth at most a-2.
inline long depth_a_order(const RootedTreePartition& tp, int a) {
  require(a >= 1, "depth_a_order needs a >= 1");
  if (a == 1) return 0;
  const int t = tp.size();
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(t));
  for (int x = 1; x < t; ++x) kids[static_cast<std::size_t>(tp.parent[static_cast<std::size_t>(x)])].push_back(x);
  long best = 0;
  for (int x = 0; x < t; ++x) {
    long total = 0;
    std::vector<int> level{x};
    for (int d = 0; d <= a - 2 && !level.empty(); ++d) {
      std::vector<int> next;
      for (int y : level) {
        total += static_cast<long>(tp.beta[static_cast<std::size_t>(y)].size());
        for (int c : kids[static_cast<std::size_t>(y)]) next.push_back(c);
      }
      level = std::move(next);
    }
    best = std::max(best, total);
  }
  return best;
}

/// X_i = union of bags at depth congruent to i mod a.
inline std::vector<VertexSet> depth_classes(const RootedTreePartition& tp, int a) {
  require(a >= 1, "depth_classes needs a >= 1");
  std::vector<VertexSet> x(static_cast<std::size_t>(a));
  for (int v = 0; v < tp.size(); ++v) {
    auto& c = x[static_cast<std::size_t>(tp.depth[static_cast<std::size_t>(v)] % a)];
    c.insert(c.end(), tp.beta[static_cast<std::size_t>(v)].begin(), tp.beta[static_cast<std::size_t>(v)].end());
  }
  for (auto& c : x) c = normalized(std::move(c));
  return x;
}

struct TreePartitionDistribution {
  ThinDistribution dist;
  long bound = 0;
};

/// Uniform distribution on the depth classes; bound is the depth-a order,
/// checked against star(G - X_i) for every class.
inline TreePartitionDistribution tp_to_distribution(const Graph& g, const RootedTreePartition& tp, int a) {
  TreePartitionDistribution out{uniform_on_disjoint(depth_classes(tp, a), a), depth_a_order(tp, a)};
  for (const auto& e : out.dist.entries()) {
    if (star(remove_vertices(g, e.set).graph) > out.bound) throw VerificationError("tp_to_distribution: component exceeds the depth-a order");
  }
  return out;
}

/// Balance point of the two terms of the goodtp bound, clamped to [1, a].
inline int choose_b(int a, int delta) {
  require(a >= 1 && delta >= 3, "choose_b needs a >= 1 and delta >= 3");
  double b = std::round(std::sqrt(a * std::log(6.0) / std::log(static_cast<double>(delta - 1))));
  return std::clamp(static_cast<int>(b), 1, a);
}

/// Exact test of D <= 12k(Δ-1)^a((Δ-1)^{b-1} + 6^{a/b}).
inline bool goodtp_bound_holds(const BigInt& d, long k, int delta, int a, int b) {
  BigInt big_a = pow_big(delta - 1, static_cast<unsigned long>(a + b - 1)) * (12 * k);
  BigInt big_b = pow_big(delta - 1, static_cast<unsigned long>(a)) * (12 * k);
  if (d <= big_a) return true;
  BigInt lhs = d - big_a;
  BigInt rhs;
  mpz_pow_ui(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<unsigned long>(b));
  mpz_pow_ui(rhs.get_mpz_t(), big_b.get_mpz_t(), static_cast<unsigned long>(b));
  rhs *= pow_big(6, static_cast<unsigned long>(a));
  return lhs <= rhs;
}

/// Floor of 12k(Δ-1)^a((Δ-1)^{b-1} + 6^{a/b}).
inline BigInt goodtp_bound(long k, int delta, int a, int b) {
  BigInt big_a = pow_big(delta - 1, static_cast<unsigned long>(a + b - 1)) * (12 * k);
  BigInt big_b = pow_big(delta - 1, static_cast<unsigned long>(a)) * (12 * k);
  BigInt inner;
  mpz_pow_ui(inner.get_mpz_t(), big_b.get_mpz_t(), static_cast<unsigned long>(b));
  inner *= pow_big(6, static_cast<unsigned long>(a));
  BigInt root;
  mpz_root(root.get_mpz_t(), inner.get_mpz_t(), static_cast<unsigned long>(b));
  return big_a + root;
}

struct StarFragility {
  ThinDistribution dist;
  BigInt bound;
  long measured = 0;
  int b = 1;
  std::vector<RootedTreePartition> partitions;  // per component, global ids
};

/// Per component: goodtp partition, depth classes mod a; the classes of all
/// components are merged. `decompose` supplies a decomposition of width < k
/// for a component (local ids); without it treewidth_upper is used.
using ComponentDecomposer = std::function<TreeDecompositionWitness(const Subgraph&)>;

inline StarFragility star_fragile_tw(const Graph& g, long k, int delta, int a, const ComponentDecomposer& decompose = {}, int b = 0) {
  require(a >= 1, "star_fragile_tw needs a >= 1");
  if (g.max_degree() > delta) throw PreconditionError("maximum degree " + std::to_string(g.max_degree()) + " exceeds delta " + std::to_string(delta));
  StarFragility out;
  out.b = b > 0 ? b : choose_b(a, delta);
  require(out.b <= a, "star_fragile_tw needs b <= a");
  out.bound = goodtp_bound(k, delta, a, out.b);
  std::vector<VertexSet> classes(static_cast<std::size_t>(a));
  for (const auto& comp : components(g)) {
    auto sub = induced_subgraph(g, comp);
    TreeDecompositionWitness local = decompose ? decompose(sub) : treewidth_upper(sub.graph).witness;
    if (local.width >= k) {
      throw ClassViolation("component treewidth witness has width " + std::to_string(local.width) + ", not below k = " + std::to_string(k));
    }
    auto tp = build_goodtp(sub.graph, local, k, delta, a, out.b);
    out.measured = std::max(out.measured, depth_a_order(tp, a));
    auto cls = depth_classes(tp, a);
    for (int i = 0; i < a; ++i) {
      auto lifted = sub.lift(cls[static_cast<std::size_t>(i)]);
      classes[static_cast<std::size_t>(i)] = set_union(classes[static_cast<std::size_t>(i)], lifted);
    }
    for (auto* sets : {&tp.beta, &tp.sigma, &tp.gamma, &tp.kappa}) {
      for (auto& s : *sets) s = sub.lift(s);
    }
    out.partitions.push_back(std::move(tp));
  }
  if (!goodtp_bound_holds(BigInt(out.measured), k, delta, a, out.b)) throw VerificationError("depth-a order exceeds the goodtp bound");
  out.dist = uniform_on_disjoint(classes, a);
  for (const auto& e : out.dist.entries()) {
    if (star(remove_vertices(g, e.set).graph) > out.measured) throw VerificationError("star_fragile_tw: component exceeds the depth-a order");
  }
  return out;
}

struct PlanarStarFragility {
  ThinDistribution dist;
  BigInt bound;
  int outer_a = 0;  // a'
  int inner_a = 0;  // a''
  long k = 0;
  int b = 1;
};

/// a' = ceil(2^sqrt(a)), doubled until 1/a' + 1/(a+1) < 1/a.
inline int outer_rate(int a) {
  require(a >= 1 && a <= 900, "outer_rate needs 1 <= a <= 900");
  long a1 = static_cast<long>(std::ceil(std::pow(2.0, std::sqrt(static_cast<double>(a))) - 1e-9));
  const long a2 = a + 1;
  while (static_cast<long>(a) * (a1 + a2) >= a1 * a2) a1 *= 2;
  require(a1 <= 1L << 30, "outer_rate overflow");
  return static_cast<int>(a1);
}

/// Planar layering at rate a', then on every outcome G - X the treewidth
/// pipeline at rate a+1 with k = 3a'-2 using the layering's decompositions.
inline PlanarStarFragility star_fragile_planar(const Graph& g, int delta, int a, std::uint64_t seed = 0, std::size_t threshold = 10000) {
  require(a >= 1, "star_fragile_planar needs a >= 1");
  if (!g.embedded()) throw PreconditionError("star_fragile_planar needs an embedded graph");
  validate_embedding(g);
  if (g.max_degree() > delta) throw PreconditionError("maximum degree " + std::to_string(g.max_degree()) + " exceeds delta " + std::to_string(delta));
  PlanarStarFragility out;
  out.outer_a = outer_rate(a);
  out.inner_a = a + 1;
  out.k = 3L * out.outer_a - 2;
  out.b = choose_b(out.inner_a, delta);
  out.bound = goodtp_bound(out.k, delta, out.inner_a, out.b);
  auto outer = planar_tw_layering(g, out.outer_a);
  DistributionFamily family;
  for (const auto& e : outer.dist.entries()) {
    std::size_t cls = 0;
    while (outer.classes[cls] != e.set) ++cls;
    const auto& certs = outer.certificates[cls];
    auto h = remove_vertices(g, e.set);
    ComponentDecomposer decompose = [&](const Subgraph& comp) {
      VertexSet global = h.lift(comp.to_parent);
      for (const auto& c : certs) {
        if (c.vertices == global) return localize_decomposition(localize_decomposition(c.td, h), comp);
      }
      throw VerificationError("star_fragile_planar: no layering certificate for a component");
    };
    auto inner = star_fragile_tw(h.graph, out.k, delta, out.inner_a, decompose, out.b);
    std::vector<Entry> lifted;
    for (const auto& f : inner.dist.entries()) lifted.push_back({h.lift(f.set), f.prob});
    auto d = ThinDistribution::explicit_dist(std::move(lifted), inner.dist.eps());
    d.set_derivation(inner.dist.derivation());
    family.emplace(e.set, std::move(d));
  }
  out.dist = compose(outer.dist, family, seed, threshold);
  return out;
}

}  // namespace fragile
