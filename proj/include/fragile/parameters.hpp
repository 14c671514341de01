#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fragile/chordal.hpp"
#include "fragile/graph.hpp"

namespace fragile {

/// Largest component order; 0 for the empty graph.
inline int star(const Graph& g) {
  int best = 0;
  for (const auto& c : components(g)) best = std::max(best, static_cast<int>(c.size()));
  return best;
}

/// Rooted forest over the vertices of a host graph. Vertices marked
/// kAbsent are not part of the witnessed graph (e.g. deleted sets).
struct TreedepthWitness {
  static constexpr Vertex kRoot = -1;
  static constexpr Vertex kAbsent = -2;
  std::vector<Vertex> parent;
  int depth_bound = 0;  // witnessed treedepth; forest depth <= depth_bound - 1
};

/// Depth of every present vertex (roots have depth 0), or nullopt when the
/// parent map has a cycle or points at absent/out-of-range vertices.
inline std::optional<std::vector<int>> forest_depths(const std::vector<Vertex>& parent) {
  const std::size_t n = parent.size();
  std::vector<int> depth(n, -1);
  std::vector<char> state(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (parent[s] == TreedepthWitness::kAbsent || depth[s] >= 0) continue;
    std::vector<std::size_t> path;
    std::size_t v = s;
    int base = 0;
    for (;;) {
      if (parent[v] == TreedepthWitness::kAbsent) return std::nullopt;
      if (depth[v] >= 0) {
        base = depth[v] + 1;
        break;
      }
      if (state[v] == 1) return std::nullopt;
      state[v] = 1;
      path.push_back(v);
      Vertex p = parent[v];
      if (p == TreedepthWitness::kRoot) break;
      if (p < 0 || static_cast<std::size_t>(p) >= n) return std::nullopt;
      v = static_cast<std::size_t>(p);
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth[*it] = base++;
  }
  return depth;
}

inline int witness_depth(const TreedepthWitness& w) {
  auto d = forest_depths(w.parent);
  if (!d) throw PreconditionError("treedepth witness is not a forest");
  int m = 0;
  for (std::size_t v = 0; v < w.parent.size(); ++v) {
    if (w.parent[v] != TreedepthWitness::kAbsent) m = std::max(m, (*d)[v] + 1);
  }
  return m;
}

inline bool is_ancestor(const std::vector<Vertex>& parent, Vertex anc, Vertex v) {
  while (v >= 0) {
    if (v == anc) return true;
    v = parent[static_cast<std::size_t>(v)];
  }
  return false;
}

/// Both witness invariants: depth within the bound, every edge between
/// present vertices ancestor-related. Absent vertices are ignored together
/// with their edges.
inline bool verify_td_witness(const Graph& g, const TreedepthWitness& w) {
  if (static_cast<int>(w.parent.size()) != g.order()) return false;
  auto depth = forest_depths(w.parent);
  if (!depth) return false;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (w.parent[static_cast<std::size_t>(v)] != TreedepthWitness::kAbsent && (*depth)[static_cast<std::size_t>(v)] > w.depth_bound - 1) return false;
  }
  for (auto [u, v] : g.edges()) {
    if (w.parent[static_cast<std::size_t>(u)] == TreedepthWitness::kAbsent || w.parent[static_cast<std::size_t>(v)] == TreedepthWitness::kAbsent) continue;
    if (!is_ancestor(w.parent, u, v) && !is_ancestor(w.parent, v, u)) return false;
  }
  return true;
}

namespace detail {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }

/// Exact treedepth on vertex subsets of a graph with at most 64 vertices.
class TreedepthSolver {
 public:
  explicit TreedepthSolver(const Graph& g) : g_(g), adj_(static_cast<std::size_t>(g.order()), 0) {
    require(g.order() <= 64, "exact treedepth supports at most 64 vertices");
    for (Vertex v = 0; v < g.order(); ++v) {
      for (Vertex w : g.neighbors(v)) adj_[static_cast<std::size_t>(v)] |= Mask{1} << w;
    }
  }

  std::vector<Mask> components(Mask s) const {
    std::vector<Mask> out;
    Mask rest = s;
    while (rest) {
      Mask comp = rest & (~rest + 1);
      Mask frontier = comp;
      while (frontier) {
        int v = __builtin_ctzll(frontier);
        frontier &= frontier - 1;
        Mask nb = adj_[static_cast<std::size_t>(v)] & s & ~comp;
        comp |= nb;
        frontier |= nb;
      }
      out.push_back(comp);
      rest &= ~comp;
    }
    return out;
  }

  /// td(G[s]) when it is below `ub`; otherwise some value >= ub.
  int solve(Mask s, int ub) {
    if (s == 0) return 0;
    if (auto it = exact_.find(s); it != exact_.end()) return it->second;
    auto comps = components(s);
    if (comps.size() > 1) {
      int best = 0;
      for (Mask c : comps) {
        best = std::max(best, solve(c, ub));
        if (best >= ub) return best;
      }
      exact_[s] = best;
      return best;
    }
    int lb = lower_bound(s);
    if (auto it = known_lb_.find(s); it != known_lb_.end()) lb = std::max(lb, it->second);
    if (lb >= ub) return lb;
    const int n = popcount(s);
    if (n == 1) {
      exact_[s] = 1;
      root_[s] = __builtin_ctzll(s);
      return 1;
    }
    std::vector<int> cand;
    for (Mask r = s; r; r &= r - 1) cand.push_back(__builtin_ctzll(r));
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
      return popcount(adj_[static_cast<std::size_t>(a)] & s) > popcount(adj_[static_cast<std::size_t>(b)] & s);
    });
    int best = std::min(ub, n + 1);
    int best_root = -1;
    for (int v : cand) {
      int r = 1 + solve(s & ~(Mask{1} << v), best - 1);
      if (r < best) {
        best = r;
        best_root = v;
        if (best <= lb) break;
      }
    }
    if (best_root >= 0 && best < ub) {
      exact_[s] = best;
      root_[s] = best_root;
      return best;
    }
    known_lb_[s] = ub;
    return ub;
  }

  /// Builds the elimination forest for G[s] into `parent` (global ids).
  void build(Mask s, Vertex above, std::vector<Vertex>& parent) {
    for (Mask c : components(s)) {
      int td = solve(c, 65);
      (void)td;
      int r = root_.at(c);
      parent[static_cast<std::size_t>(r)] = above;
      build(c & ~(Mask{1} << r), r, parent);
    }
  }

 private:
  int lower_bound(Mask s) const {
    // a shortest path from the lowest vertex is induced; a path on p
    // vertices has treedepth ceil(log2(p+1))
    int src = __builtin_ctzll(s);
    Mask seen = Mask{1} << src;
    Mask frontier = seen;
    int ecc = 0;
    while (true) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj_[static_cast<std::size_t>(__builtin_ctzll(f))];
      next &= s & ~seen;
      if (!next) break;
      seen |= next;
      frontier = next;
      ++ecc;
    }
    int p = ecc + 1;
    int lb = 0;
    while ((1 << lb) < p + 1) ++lb;
    // greedy clique
    Mask clique = 0;
    int csize = 0;
    for (Mask r = s; r; r &= r - 1) {
      int v = __builtin_ctzll(r);
      if ((adj_[static_cast<std::size_t>(v)] & clique) == clique) {
        clique |= Mask{1} << v;
        ++csize;
      }
    }
    return std::max(lb, csize);
  }

  const Graph& g_;
  std::vector<Mask> adj_;
  std::unordered_map<Mask, int> exact_;
  std::unordered_map<Mask, int> known_lb_;
  std::unordered_map<Mask, int> root_;
};

}  // namespace detail

struct TreedepthResult {
  int value = 0;
  TreedepthWitness witness;
};

/// Exact treedepth by branch and bound over vertex subsets, one component at
/// a time. Every component must have at most `budget` vertices.
inline TreedepthResult exact_treedepth(const Graph& g, int budget = 25) {
  TreedepthResult out;
  out.witness.parent.assign(static_cast<std::size_t>(g.order()), TreedepthWitness::kRoot);
  for (const auto& comp : components(g)) {
    if (static_cast<int>(comp.size()) > budget || comp.size() > 64) {
      throw PreconditionError("component of order " + std::to_string(comp.size()) + " exceeds the exact treedepth budget " + std::to_string(budget));
    }
    auto sub = induced_subgraph(g, comp);
    detail::TreedepthSolver solver(sub.graph);
    detail::Mask all = sub.graph.order() == 64 ? ~detail::Mask{0} : ((detail::Mask{1} << sub.graph.order()) - 1);
    int td = solver.solve(all, 65);
    out.value = std::max(out.value, td);
    std::vector<Vertex> local(static_cast<std::size_t>(sub.graph.order()), TreedepthWitness::kRoot);
    solver.build(all, TreedepthWitness::kRoot, local);
    for (std::size_t i = 0; i < local.size(); ++i) {
      Vertex p = local[i];
      out.witness.parent[static_cast<std::size_t>(comp[i])] = p < 0 ? p : comp[static_cast<std::size_t>(p)];
    }
  }
  out.witness.depth_bound = out.value;
  return out;
}

/// Tree decomposition: bags with a parent per bag (-1 for roots of the
/// forest of bags).
struct TreeDecompositionWitness {
  std::vector<VertexSet> bags;
  std::vector<int> parent;
  int width = -1;
};

inline std::string tree_decomposition_problem(const Graph& g, const TreeDecompositionWitness& td) {
  const std::size_t nb = td.bags.size();
  if (td.parent.size() != nb) return "bag parent list has wrong length";
  int width = -1;
  for (const auto& b : td.bags) {
    if (!is_normalized(b)) return "bag is not a sorted set";
    for (Vertex v : b) {
      if (!g.valid(v)) return "bag vertex out of range";
    }
    width = std::max(width, static_cast<int>(b.size()) - 1);
  }
  if (width > td.width) return "bag larger than claimed width";
  std::vector<int> tmp(td.parent.begin(), td.parent.end());
  if (!forest_depths(tmp)) return "bag tree has a cycle";
  std::vector<int> count(static_cast<std::size_t>(g.order()), 0);
  for (const auto& b : td.bags) {
    for (Vertex v : b) ++count[static_cast<std::size_t>(v)];
  }
  // vertex subtrees: a vertex's bags are connected iff exactly one of them
  // has a parent bag missing the vertex
  std::vector<int> tops(static_cast<std::size_t>(g.order()), 0);
  for (std::size_t i = 0; i < nb; ++i) {
    for (Vertex v : td.bags[i]) {
      int p = td.parent[i];
      if (p < 0 || !contains(td.bags[static_cast<std::size_t>(p)], v)) ++tops[static_cast<std::size_t>(v)];
    }
  }
  for (Vertex v = 0; v < g.order(); ++v) {
    if (count[static_cast<std::size_t>(v)] == 0) return "vertex " + std::to_string(v) + " in no bag";
    if (tops[static_cast<std::size_t>(v)] != 1) return "bags of vertex " + std::to_string(v) + " are not connected";
  }
  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (const auto& b : td.bags) {
      if (contains(b, u) && contains(b, v)) {
        covered = true;
        break;
      }
    }
    if (!covered) return "edge " + std::to_string(u) + " " + std::to_string(v) + " not covered";
  }
  return {};
}

inline bool verify_tree_decomposition(const Graph& g, const TreeDecompositionWitness& td) { return tree_decomposition_problem(g, td).empty(); }

/// Clique-tree decomposition from a perfect ordering of a chordal supergraph
/// h of g: bag(v) = {v} plus earlier neighbours, parent bag = bag of the
/// latest earlier neighbour.
inline TreeDecompositionWitness decomposition_from_ordering(const Graph& h, const EliminationOrdering& order) {
  TreeDecompositionWitness td;
  const int n = h.order();
  auto pos = positions_of(order);
  td.bags.resize(static_cast<std::size_t>(n));
  td.parent.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    Vertex v = order[static_cast<std::size_t>(i)];
    auto earlier = earlier_neighbors(h, pos, v);
    Vertex latest = -1;
    for (Vertex w : earlier) {
      if (latest < 0 || pos[static_cast<std::size_t>(w)] > pos[static_cast<std::size_t>(latest)]) latest = w;
    }
    earlier.push_back(v);
    td.bags[static_cast<std::size_t>(i)] = normalized(std::move(earlier));
    if (latest >= 0) td.parent[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(latest)];
    td.width = std::max(td.width, static_cast<int>(td.bags[static_cast<std::size_t>(i)].size()) - 1);
  }
  return td;
}

struct TreewidthResult {
  int value = -1;
  TreeDecompositionWitness witness;
};

/// Narrower of the min-fill and min-degree clique trees (exact when g is
/// chordal, since a chordal input is returned unchanged, and when tw(g) <= 2).
inline TreewidthResult treewidth_upper(const Graph& g) {
  auto mcs = mcs_ordering(g);
  TreewidthResult out;
  if (mcs.chordal) {
    out.witness = decomposition_from_ordering(g, mcs.order);
  } else {
    auto ch = greedy_chordalize(g);
    out.witness = decomposition_from_ordering(ch.graph, ch.order);
    if (out.witness.width > 1) {
      auto md = greedy_chordalize(g, EliminationRule::MinDegree);
      auto alt = decomposition_from_ordering(md.graph, md.order);
      if (alt.width < out.witness.width) out.witness = std::move(alt);
    }
  }
  out.value = out.witness.width;
  return out;
}

/// Exact treewidth by dynamic programming over vertex subsets (n <= 20).
inline int exact_treewidth(const Graph& g) {
  const int n = g.order();
  require(n <= 20, "exact treewidth supports at most 20 vertices");
  if (n == 0) return -1;
  using detail::Mask;
  std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) adj[static_cast<std::size_t>(v)] |= Mask{1} << w;
  }
  // q(s, v): vertices outside s + v reachable from v through s
  auto q = [&](Mask s, int v) {
    Mask seen = Mask{1} << v;
    Mask frontier = seen;
    Mask out = 0;
    while (frontier) {
      int x = __builtin_ctzll(frontier);
      frontier &= frontier - 1;
      Mask nb = adj[static_cast<std::size_t>(x)] & ~seen;
      seen |= nb;
      out |= nb & ~s;
      frontier |= nb & s;
    }
    return detail::popcount(out);
  };
  const std::size_t full = std::size_t{1} << n;
  std::vector<int> tw(full, n);
  tw[0] = -1;
  for (std::size_t s = 1; s < full; ++s) {
    int best = n;
    for (Mask r = s; r; r &= r - 1) {
      int v = __builtin_ctzll(r);
      Mask rest = s & ~(Mask{1} << v);
      best = std::min(best, std::max(tw[rest], q(rest, v)));
    }
    tw[s] = best;
  }
  return tw[full - 1];
}

enum class Param { Star, Td, Tw };

inline std::string param_name(Param p) {
  switch (p) {
    case Param::Star: return "star";
    case Param::Td: return "td";
    case Param::Tw: return "tw";
  }
  return "?";
}

inline Param parse_param(const std::string& s) {
  if (s == "star") return Param::Star;
  if (s == "td") return Param::Td;
  if (s == "tw") return Param::Tw;
  throw ParseError("unknown parameter '" + s + "'");
}

struct MembershipResult {
  bool member = false;
  std::string certificate;  // human-readable account of how it was decided
};

/// Decides f(G - X) <= b. Treedepth uses the supplied witness when given
/// (its vertices in X must be marked absent), otherwise exact computation
/// per component within `budget`. Treewidth uses exact computation for
/// components up to 10 vertices and the supplied per-component witness or
/// the min-fill upper bound otherwise.
inline MembershipResult verify_membership(const Graph& g, Param param, long b, const VertexSet& x, const TreedepthWitness* td_witness = nullptr,
                                          int budget = 25) {
  auto rest = remove_vertices(g, x);
  MembershipResult out;
  switch (param) {
    case Param::Star: {
      int s = star(rest.graph);
      out.member = s <= b;
      out.certificate = "star " + std::to_string(s);
      return out;
    }
    case Param::Td: {
      if (td_witness != nullptr) {
        bool ok = verify_td_witness(g, *td_witness);
        for (Vertex v = 0; v < g.order() && ok; ++v) {
          bool absent = td_witness->parent[static_cast<std::size_t>(v)] == TreedepthWitness::kAbsent;
          if (absent != contains(x, v)) ok = false;
        }
        out.member = ok && td_witness->depth_bound <= b;
        out.certificate = std::string("witness depth bound ") + std::to_string(td_witness->depth_bound) + (ok ? "" : " (witness invalid)");
        return out;
      }
      for (const auto& c : components(rest.graph)) {
        if (static_cast<int>(c.size()) > budget) {
          throw PreconditionError("treedepth verification needs a witness: component of order " + std::to_string(c.size()) + " exceeds budget");
        }
      }
      int td = exact_treedepth(rest.graph, budget).value;
      out.member = td <= b;
      out.certificate = "exact td " + std::to_string(td);
      return out;
    }
    case Param::Tw: {
      int worst = -1;
      for (const auto& c : components(rest.graph)) {
        auto sub = induced_subgraph(rest.graph, c);
        int w = c.size() <= 10 ? exact_treewidth(sub.graph) : treewidth_upper(sub.graph).value;
        worst = std::max(worst, w);
      }
      out.member = worst <= b;
      out.certificate = "tw <= " + std::to_string(worst);
      return out;
    }
  }
  return out;
}

}  // namespace fragile
