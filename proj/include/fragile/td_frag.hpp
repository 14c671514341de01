#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fragile/chordal.hpp"
#include "fragile/graph.hpp"
#include "fragile/layering.hpp"
#include "fragile/parameters.hpp"
#include "fragile/plane.hpp"
#include "fragile/rational.hpp"
#include "fragile/thin_dist.hpp"
#include "fragile/trigeodesic.hpp"

namespace fragile {

/// One sampled deletion set with a treedepth witness of G - Z (vertices of
/// Z absent).
struct TdOutcome {
  VertexSet z;
  TreedepthWitness witness;
};

struct TdFragility {
  ThinDistribution dist;
  BigInt bound;
  std::string bound_formula;
  int t_used = -1;
  std::function<TdOutcome(std::uint64_t index)> outcome;
};

namespace detail {

using Parent = std::vector<Vertex>;

/// Nearest ancestor inside `keep` for every kept vertex; others absent.
inline Parent restrict_forest(const Parent& parent, const std::vector<char>& keep) {
  Parent out(parent.size(), TreedepthWitness::kAbsent);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (!keep[v]) continue;
    Vertex p = parent[v];
    while (p >= 0 && !keep[static_cast<std::size_t>(p)]) p = parent[static_cast<std::size_t>(p)];
    out[v] = p >= 0 ? p : TreedepthWitness::kRoot;
  }
  return out;
}

inline int depth_in(const Parent& parent, std::vector<int>& depth, Vertex v) {
  std::vector<Vertex> chain;
  Vertex u = v;
  while (u >= 0 && depth[static_cast<std::size_t>(u)] < 0) {
    chain.push_back(u);
    u = parent[static_cast<std::size_t>(u)];
  }
  int base = u >= 0 ? depth[static_cast<std::size_t>(u)] + 1 : 0;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[static_cast<std::size_t>(*it)] = base++;
  return depth[static_cast<std::size_t>(v)];
}

/// Attaches the forest `part` (vertices of `members`) below `host` one
/// component of G[members] at a time: each component hangs below the deepest
/// vertex of its neighbourhood among the present host vertices, which must
/// be a clique.
inline void attach_components(const Graph& g, Parent& host, std::vector<int>& depth, const Parent& part, const VertexSet& members,
                              const std::vector<char>& anchorable, bool clique_checks) {
  for (const auto& c : components_of(g, members)) {
    std::vector<char> in_c(host.size(), 0);
    for (Vertex v : c) in_c[static_cast<std::size_t>(v)] = 1;
    VertexSet k;
    for (Vertex v : c) {
      for (Vertex w : g.neighbors(v)) {
        if (anchorable[static_cast<std::size_t>(w)] && host[static_cast<std::size_t>(w)] != TreedepthWitness::kAbsent) k.push_back(w);
      }
    }
    k = normalized(std::move(k));
    if (clique_checks && !is_clique(g, k)) throw VerificationError("clique condition fails: attachment set is not a clique");
    Vertex anchor = TreedepthWitness::kRoot;
    int best = -1;
    for (Vertex w : k) {
      int d = depth_in(host, depth, w);
      if (d > best) {
        best = d;
        anchor = w;
      }
    }
    auto restricted = restrict_forest(part, in_c);
    for (Vertex v : c) {
      Vertex p = restricted[static_cast<std::size_t>(v)];
      host[static_cast<std::size_t>(v)] = p >= 0 ? p : anchor;
    }
    for (Vertex v : c) depth_in(host, depth, v);
  }
}

}  // namespace detail

/// Joins the witness `h` (vertices outside H absent) with witnesses of the
/// parts V(H_i) - V(H), each over the same host ids with only its part present.
inline TreedepthWitness td_witness_join(const Graph& g, const TreedepthWitness& h, const std::vector<std::pair<VertexSet, TreedepthWitness>>& parts,
                                        bool clique_checks = true) {
  const std::size_t n = static_cast<std::size_t>(g.order());
  require(h.parent.size() == n, "td_witness_join: witness size mismatch");
  std::vector<int> owner(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (h.parent[v] != TreedepthWitness::kAbsent) owner[v] = 0;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require(parts[i].second.parent.size() == n, "td_witness_join: part witness size mismatch");
    for (Vertex v : parts[i].first) {
      if (owner[static_cast<std::size_t>(v)] >= 0) throw PreconditionError("overlap condition fails: part meets H or another part");
      owner[static_cast<std::size_t>(v)] = static_cast<int>(i) + 1;
      if (parts[i].second.parent[static_cast<std::size_t>(v)] == TreedepthWitness::kAbsent) throw PreconditionError("td_witness_join: part vertex absent from its witness");
    }
  }
  for (auto [u, v] : g.edges()) {
    int a = owner[static_cast<std::size_t>(u)];
    int b = owner[static_cast<std::size_t>(v)];
    if (a > 0 && b > 0 && a != b) throw PreconditionError("overlap condition fails: edge between two parts");
  }
  detail::Parent joined = h.parent;
  std::vector<int> depth(n, -1);
  std::vector<char> anchorable(n, 0);
  for (std::size_t v = 0; v < n; ++v) anchorable[v] = owner[v] == 0;
  int part_depth = 0;
  for (const auto& [members, w] : parts) {
    detail::attach_components(g, joined, depth, w.parent, members, anchorable, clique_checks);
    part_depth = std::max(part_depth, witness_depth(w));
  }
  TreedepthWitness out{joined, 0};
  out.depth_bound = witness_depth(out);
  if (out.depth_bound > witness_depth(h) + part_depth) throw VerificationError("td_witness_join: depth exceeds the sum of the input depths");
  return out;
}

namespace detail {

struct LocalSample {
  VertexSet y;
  Parent parent;
};

using InnerSampler = std::function<LocalSample(const Graph&, std::mt19937_64&)>;

/// BFS layers of every component from its first vertex in a maximum
/// cardinality search order.
inline std::vector<int> chordal_layers(const Graph& h) {
  const int n = h.order();
  std::vector<int> layer(static_cast<std::size_t>(n), -1);
  for (Vertex r : mcs_ordering(h).order) {
    if (layer[static_cast<std::size_t>(r)] >= 0) continue;
    auto d = bfs_distances(h, r);
    for (Vertex v = 0; v < n; ++v) {
      if (d[static_cast<std::size_t>(v)] >= 0) layer[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(v)];
    }
  }
  return layer;
}

/// Deletes the layers congruent to a uniform offset mod `period`, samples
/// inside every other layer, and stacks the layer witnesses downward.
inline LocalSample layered_sample(const Graph& h, const std::vector<int>& layer, int period, std::mt19937_64& rng, const InnerSampler& inner,
                                  bool clique_checks) {
  const int n = h.order();
  const int offset = static_cast<int>(rng() % static_cast<std::uint64_t>(period));
  int top = -1;
  for (int l : layer) top = std::max(top, l);
  std::vector<VertexSet> members(static_cast<std::size_t>(top + 1));
  for (Vertex v = 0; v < n; ++v) members[static_cast<std::size_t>(layer[static_cast<std::size_t>(v)])].push_back(v);
  LocalSample out;
  out.parent.assign(static_cast<std::size_t>(n), TreedepthWitness::kAbsent);
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  std::vector<char> previous(static_cast<std::size_t>(n), 0);
  for (int j = 0; j <= top; ++j) {
    const auto& lj = members[static_cast<std::size_t>(j)];
    if (j % period == offset) {
      out.y.insert(out.y.end(), lj.begin(), lj.end());
      std::fill(previous.begin(), previous.end(), 0);
      continue;
    }
    auto sub = induced_subgraph(h, lj);
    auto s = inner(sub.graph, rng);
    VertexSet y = sub.lift(s.y);
    out.y.insert(out.y.end(), y.begin(), y.end());
    Parent lifted(static_cast<std::size_t>(n), TreedepthWitness::kAbsent);
    for (std::size_t i = 0; i < lj.size(); ++i) {
      Vertex p = s.parent[i];
      lifted[static_cast<std::size_t>(lj[i])] = p >= 0 ? lj[static_cast<std::size_t>(p)] : p;
    }
    VertexSet rest = set_difference(lj, y);
    attach_components(h, out.parent, depth, lifted, rest, previous, clique_checks);
    std::fill(previous.begin(), previous.end(), 0);
    for (Vertex v : rest) previous[static_cast<std::size_t>(v)] = 1;
  }
  out.y = normalized(std::move(out.y));
  return out;
}

inline LocalSample empty_sample(const Graph& h) {
  if (h.size() != 0) throw VerificationError("layer of width 0 has edges");
  return LocalSample{{}, Parent(static_cast<std::size_t>(h.order()), TreedepthWitness::kRoot)};
}

inline LocalSample tw_sample(const Graph& h, int t, long a, std::mt19937_64& rng) {
  if (h.size() == 0 || t == 0) return empty_sample(h);
  InnerSampler inner = [t, a](const Graph& layer, std::mt19937_64& r) { return tw_sample(layer, t - 1, 2 * a, r); };
  return layered_sample(h, chordal_layers(h), static_cast<int>(2 * a), rng, inner, true);
}

inline void balanced_path(const std::vector<Vertex>& seq, std::size_t lo, std::size_t hi, Vertex parent, Parent& out) {
  if (lo >= hi) return;
  std::size_t mid = lo + (hi - lo) / 2;
  out[static_cast<std::size_t>(seq[mid])] = parent;
  balanced_path(seq, lo, mid, seq[mid], out);
  balanced_path(seq, mid + 1, hi, seq[mid], out);
}

/// Layer sampler for disjoint unions of paths: one offset mod `period`
/// deletes every period-th vertex counted from the smaller-id endpoint.
inline LocalSample path_sample(const Graph& h, long period, std::mt19937_64& rng) {
  const long offset = static_cast<long>(rng() % static_cast<std::uint64_t>(period));
  LocalSample out;
  out.parent.assign(static_cast<std::size_t>(h.order()), TreedepthWitness::kAbsent);
  for (const auto& c : components(h)) {
    std::size_t edges = 0;
    Vertex start = -1;
    for (Vertex v : c) {
      if (h.degree(v) > 2) throw ClassViolation("layer not a union of paths");
      edges += static_cast<std::size_t>(h.degree(v));
      if (h.degree(v) <= 1 && start < 0) start = v;
    }
    if (edges / 2 + 1 != c.size() || start < 0) throw ClassViolation("layer not a union of paths");
    std::vector<Vertex> seq{start};
    for (Vertex prev = -1, cur = start; seq.size() < c.size();) {
      Vertex next = h.neighbors(cur)[0] == prev ? h.neighbors(cur)[1] : h.neighbors(cur)[0];
      seq.push_back(next);
      prev = cur;
      cur = next;
    }
    std::size_t run = 0;
    for (std::size_t i = 0; i <= seq.size(); ++i) {
      if (i == seq.size() || static_cast<long>(i % static_cast<std::size_t>(period)) == offset) {
        balanced_path(seq, run, i, TreedepthWitness::kRoot, out.parent);
        if (i < seq.size()) out.y.push_back(seq[i]);
        run = i + 1;
      }
    }
  }
  out.y = normalized(std::move(out.y));
  return out;
}

inline LocalSample outerplanar_sample(const Graph& h, long a, std::mt19937_64& rng) {
  InnerSampler inner = [a](const Graph& layer, std::mt19937_64& r) { return path_sample(layer, 2 * a, r); };
  return layered_sample(h, chordal_layers(h), static_cast<int>(2 * a), rng, inner, true);
}

inline LocalSample planar_chordal_sample(const Graph& h, long a, std::mt19937_64& rng) {
  InnerSampler inner = [a](const Graph& layer, std::mt19937_64& r) { return outerplanar_sample(layer, 2 * a, r); };
  return layered_sample(h, chordal_layers(h), static_cast<int>(2 * a), rng, inner, true);
}

/// Chordal supergraph by repeatedly eliminating a vertex of degree <= 2
/// (smallest id first) and joining its neighbours.
inline Graph degree_two_chordalization(const Graph& g) {
  Graph h = g;
  Graph rest = g;
  std::vector<char> gone(static_cast<std::size_t>(g.order()), 0);
  for (int step = 0; step < g.order(); ++step) {
    Vertex pick = -1;
    for (Vertex v = 0; v < g.order(); ++v) {
      if (!gone[static_cast<std::size_t>(v)] && rest.degree(v) <= 2) {
        pick = v;
        break;
      }
    }
    if (pick < 0) throw ClassViolation("input not outerplanar/chordalizable as claimed: every remaining vertex has degree > 2");
    VertexSet nb = rest.neighbors(pick);
    if (nb.size() == 2) {
      h.try_add_edge(nb[0], nb[1]);
      rest.try_add_edge(nb[0], nb[1]);
    }
    Graph next(g.order());
    for (auto [u, v] : rest.edges()) {
      if (u != pick && v != pick) next.add_edge(u, v);
    }
    rest = std::move(next);
    gone[static_cast<std::size_t>(pick)] = 1;
  }
  return h;
}

inline Derivation offset_derivation(long a, const std::string& what, Derivation inner) {
  Rational outer = make_rational(1, 2 * a);
  Derivation lifted{"lift", inner.eps, "independent per layer", {inner}};
  return Derivation{"compose", outer + inner.eps, "", {Derivation{"uniform", outer, what, {}}, lifted}};
}

inline TdFragility make_fragility(std::uint64_t seed, Derivation der, BigInt bound, std::string formula, const Graph& g,
                                  std::function<LocalSample(std::mt19937_64&)> run) {
  TdFragility out;
  out.bound = bound;
  out.bound_formula = std::move(formula);
  auto host = std::make_shared<Graph>(g);
  out.outcome = [host, run, seed, bound](std::uint64_t index) {
    auto rng = rng_for(seed, index);
    auto s = run(rng);
    TdOutcome o{s.y, TreedepthWitness{s.parent, 0}};
    o.witness.depth_bound = witness_depth(o.witness);
    if (!verify_td_witness(*host, o.witness)) throw VerificationError("sampled witness fails the ancestor condition");
    if (BigInt(o.witness.depth_bound) > bound) throw VerificationError("sampled witness deeper than the bound");
    return o;
  };
  auto fn = out.outcome;
  out.dist = ThinDistribution::sampler(seed, std::move(der), [fn](std::uint64_t index) { return fn(index).z; });
  return out;
}

}  // namespace detail

inline BigInt td_tw_bound(int t, long a) { return pow_big(2, static_cast<unsigned long>(t * (t + 1) / 2 + 1)) * pow_big(a, static_cast<unsigned long>(t)); }
inline BigInt td_outerplanar_bound(long a) { return BigInt(2 * a * (1 + ceil_log2(a))); }
inline BigInt td_planar_chordal_bound(long a) { return BigInt(8 * a * a * (2 + ceil_log2(a))); }
inline BigInt td_planar_bound(long a) { return BigInt(384) * a * a * a * (3 + ceil_log2(a)); }

/// Layered recursion on a chordal graph (g itself when chordal, otherwise
/// the min-fill chordalization); t_used is the achieved clique number - 1.
/// A supplied t is checked against chordal inputs only.
inline TdFragility td_frag_tw(const Graph& g, long a, std::uint64_t seed = 0, int t = -1) {
  require(a >= 1, "td_frag_tw needs a >= 1");
  auto mcs = mcs_ordering(g);
  Graph h = g;
  EliminationOrdering order = mcs.order;
  if (!mcs.chordal) {
    auto ch = greedy_chordalize(g);
    h = ch.graph;
    order = ch.order;
  }
  int t_used = std::max(0, clique_number(h, order) - 1);
  if (mcs.chordal && t >= 0 && t_used > t) throw ClassViolation("chordal input has treewidth " + std::to_string(t_used) + " > " + std::to_string(t));
  std::function<Derivation(int, long)> der = [&](int level, long rate) -> Derivation {
    if (level == 0) return Derivation{"explicit", Rational(0), "edgeless remainder", {}};
    return detail::offset_derivation(rate, "BFS layer offset mod " + std::to_string(2 * rate), der(level - 1, 2 * rate));
  };
  auto out = detail::make_fragility(seed, der(t_used, a), td_tw_bound(t_used, a), "2^(t(t+1)/2+1)*a^t with t=" + std::to_string(t_used), g,
                                    [h, t_used, a](std::mt19937_64& rng) { return detail::tw_sample(h, t_used, a, rng); });
  out.t_used = t_used;
  return out;
}

inline TdFragility td_frag_outerplanar(const Graph& g, long a, std::uint64_t seed = 0) {
  require(a >= 1, "td_frag_outerplanar needs a >= 1");
  Graph h = is_chordal(g) ? g : detail::degree_two_chordalization(g);
  std::mt19937_64 probe(seed);
  detail::outerplanar_sample(h, a, probe);
  auto der = detail::offset_derivation(a, "BFS layer offset mod " + std::to_string(2 * a),
                                       Derivation{"uniform", make_rational(1, 2 * a), "path offset mod " + std::to_string(2 * a), {}});
  return detail::make_fragility(seed, der, td_outerplanar_bound(a), "2a(1+ceil(log2 a))", g,
                                [h, a](std::mt19937_64& rng) { return detail::outerplanar_sample(h, a, rng); });
}

inline TdFragility td_frag_planar_chordal(const Graph& g, long a, std::uint64_t seed = 0) {
  require(a >= 1, "td_frag_planar_chordal needs a >= 1");
  if (!is_chordal(g)) throw ClassViolation("input is not chordal");
  std::mt19937_64 probe(seed);
  detail::planar_chordal_sample(g, a, probe);
  auto inner = detail::offset_derivation(2 * a, "BFS layer offset mod " + std::to_string(4 * a),
                                         Derivation{"uniform", make_rational(1, 4 * a), "path offset mod " + std::to_string(4 * a), {}});
  auto der = detail::offset_derivation(a, "BFS layer offset mod " + std::to_string(2 * a), inner);
  return detail::make_fragility(seed, der, td_planar_chordal_bound(a), "8a^2(2+ceil(log2 a))", g,
                                [g, a](std::mt19937_64& rng) { return detail::planar_chordal_sample(g, a, rng); });
}

namespace detail {

struct PlanarContext {
  std::vector<Subgraph> comps;
  std::vector<std::vector<int>> dist;
};

inline LocalSample planar_sample(const Graph& g, const PlanarContext& ctx, long a, std::mt19937_64& rng) {
  const int period = static_cast<int>(2 * a);
  const int offset = static_cast<int>(rng() % static_cast<std::uint64_t>(period));
  LocalSample out;
  out.parent.assign(static_cast<std::size_t>(g.order()), TreedepthWitness::kAbsent);
  for (std::size_t ci = 0; ci < ctx.comps.size(); ++ci) {
    const auto& comp = ctx.comps[ci];
    const auto& dist = ctx.dist[ci];
    int top = *std::max_element(dist.begin(), dist.end());
    for (Vertex v = 0; v < comp.graph.order(); ++v) {
      if (dist[static_cast<std::size_t>(v)] % period == offset) out.y.push_back(comp.to_parent[static_cast<std::size_t>(v)]);
    }
    for (int lo = 0; lo <= top;) {
      if (lo % period == offset) {
        ++lo;
        continue;
      }
      int hi = lo;
      while (hi + 1 <= top && (hi + 1) % period != offset) ++hi;
      auto minor = window_minor(comp.graph, dist, lo, hi);
      auto part = trigeodesic_partition(minor.graph, minor.root);
      const Vertex x = minor.contracted ? minor.to_host[static_cast<std::size_t>(minor.root)] : -1;
      std::vector<std::vector<Vertex>> chain(part.parts.size());
      for (std::size_t p = 0; p < part.parts.size(); ++p) {
        if (static_cast<long>(part.parts[p].size()) >= 12 * a) throw VerificationError("trigeodesic part with at least 12a vertices");
        for (Vertex m : part.parts[p]) {
          Vertex hv = minor.to_host[static_cast<std::size_t>(m)];
          if (hv != x) chain[p].push_back(comp.to_parent[static_cast<std::size_t>(hv)]);
        }
        std::sort(chain[p].begin(), chain[p].end());
      }
      auto q = planar_chordal_sample(part.quotient, 2 * a, rng);
      for (Vertex p : q.y) out.y.insert(out.y.end(), chain[static_cast<std::size_t>(p)].begin(), chain[static_cast<std::size_t>(p)].end());
      auto qdepth = forest_depths(q.parent);
      std::vector<Vertex> nodes;
      for (Vertex p = 0; p < part.quotient.order(); ++p) {
        if (q.parent[static_cast<std::size_t>(p)] != TreedepthWitness::kAbsent) nodes.push_back(p);
      }
      std::stable_sort(nodes.begin(), nodes.end(), [&](Vertex u, Vertex v) { return (*qdepth)[static_cast<std::size_t>(u)] < (*qdepth)[static_cast<std::size_t>(v)]; });
      std::vector<Vertex> tail(part.parts.size(), TreedepthWitness::kRoot);
      for (Vertex p : nodes) {
        Vertex qp = q.parent[static_cast<std::size_t>(p)];
        Vertex anchor = qp >= 0 ? tail[static_cast<std::size_t>(qp)] : TreedepthWitness::kRoot;
        for (Vertex v : chain[static_cast<std::size_t>(p)]) {
          out.parent[static_cast<std::size_t>(v)] = anchor;
          anchor = v;
        }
        tail[static_cast<std::size_t>(p)] = anchor;
      }
      lo = hi + 1;
    }
  }
  out.y = normalized(std::move(out.y));
  return out;
}

}  // namespace detail

/// Per outer offset mod 2a and per window of consecutive kept layers: plane
/// minor, trigeodesic partition, planar chordal sampler at 2a on the
/// quotient, parts lifted back as chains.
inline TdFragility td_frag_planar(const Graph& g, long a, std::uint64_t seed = 0) {
  require(a >= 1, "td_frag_planar needs a >= 1");
  if (!g.embedded()) throw PreconditionError("td_frag_planar needs an embedded graph");
  validate_embedding(g);
  auto ctx = std::make_shared<detail::PlanarContext>();
  for (const auto& c : components(g)) {
    ctx->comps.push_back(induced_subgraph(g, c));
    ctx->dist.push_back(bfs_distances(ctx->comps.back().graph, 0));
  }
  auto paths = Derivation{"uniform", make_rational(1, 8 * a), "quotient path offset mod " + std::to_string(8 * a), {}};
  auto layers = detail::offset_derivation(4 * a, "quotient layer offset mod " + std::to_string(8 * a), paths);
  auto quotient = detail::offset_derivation(2 * a, "quotient BFS layer offset mod " + std::to_string(4 * a), layers);
  auto der = detail::offset_derivation(a, "BFS layer offset mod " + std::to_string(2 * a), quotient);
  return detail::make_fragility(seed, der, td_planar_bound(a), "384a^3(3+ceil(log2 a))", g,
                                [g, ctx, a](std::mt19937_64& rng) { return detail::planar_sample(g, *ctx, a, rng); });
}

}  // namespace fragile
