#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/parameters.hpp"

namespace fragile {

/// (A, B) with A u B = V and no edge between A \ B and B \ A.
struct Separation {
  VertexSet a;
  VertexSet b;
  std::size_t order() const { return set_intersection(a, b).size(); }
};

inline bool is_separation(const Graph& g, const VertexSet& within, const Separation& s) {
  if (set_union(s.a, s.b) != within) return false;
  VertexSet only_a = set_difference(s.a, s.b);
  VertexSet only_b = set_difference(s.b, s.a);
  for (Vertex v : only_a) {
    for (Vertex w : g.neighbors(v)) {
      if (contains(only_b, w)) return false;
    }
  }
  return true;
}

/// Restriction of a tree decomposition to the local ids of an induced subgraph.
inline TreeDecompositionWitness restrict_decomposition(const TreeDecompositionWitness& td, const Subgraph& sub) {
  TreeDecompositionWitness out;
  out.parent = td.parent;
  out.width = -1;
  for (const auto& bag : td.bags) {
    VertexSet local;
    for (Vertex v : bag) {
      Vertex l = sub.local(v);
      if (l >= 0) local.push_back(l);
    }
    out.width = std::max(out.width, static_cast<int>(local.size()) - 1);
    out.bags.push_back(std::move(local));
  }
  out.width = std::max(out.width, 0);
  return out;
}

namespace detail {

/// Balanced Z-separation of G[within] from the first bag (by id) whose
/// removal leaves every component of G[within] with at most |Z|/2 vertices
/// of Z. The bags must form a decomposition of G[within] after restriction.
/// Separator vertices with no neighbour on one side are then pushed to the
/// other side while balance allows.
inline Separation centroid_separation(const Graph& g, const TreeDecompositionWitness& td, const VertexSet& within, const VertexSet& z) {
  const long zsize = static_cast<long>(z.size());
  for (const auto& full_bag : td.bags) {
    VertexSet bag = set_intersection(full_bag, within);
    auto comps = components_of(g, set_difference(within, bag));
    std::vector<long> mass;
    bool ok = true;
    for (const auto& c : comps) {
      mass.push_back(static_cast<long>(set_intersection(c, z).size()));
      if (2 * mass.back() > zsize) ok = false;
    }
    if (!ok) continue;
    std::vector<char> side(comps.size(), 0);
    std::size_t heavy = comps.size();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (3 * mass[i] >= zsize) {
        heavy = i;
        break;
      }
    }
    if (heavy < comps.size()) {
      side[heavy] = 1;
    } else {
      long acc = 0;
      for (std::size_t i = 0; i < comps.size() && 3 * acc < zsize; ++i) {
        side[i] = 1;
        acc += mass[i];
      }
    }
    Separation s{bag, bag};
    for (std::size_t i = 0; i < comps.size(); ++i) {
      auto& target = side[i] ? s.a : s.b;
      target.insert(target.end(), comps[i].begin(), comps[i].end());
    }
    s.a = normalized(std::move(s.a));
    s.b = normalized(std::move(s.b));
    auto balanced = [&](const VertexSet& side) { return 3 * static_cast<long>(set_difference(z, side).size()) <= 2 * zsize; };
    auto sees = [&](Vertex v, const VertexSet& only) {
      for (Vertex x : g.neighbors(v)) {
        if (contains(only, x)) return true;
      }
      return false;
    };
    for (Vertex v : bag) {
      VertexSet only_a = set_difference(s.a, s.b);
      VertexSet only_b = set_difference(s.b, s.a);
      VertexSet fewer_a = set_difference(s.a, {v});
      VertexSet fewer_b = set_difference(s.b, {v});
      if (!sees(v, only_a) && balanced(fewer_a)) {
        s.a = std::move(fewer_a);
      } else if (!sees(v, only_b) && balanced(fewer_b)) {
        s.b = std::move(fewer_b);
      }
    }
    return s;
  }
  throw VerificationError("no balanced bag found; the tree decomposition is invalid");
}

}  // namespace detail

/// Separation (D, B) of order at most width+1 with |Z \ D|, |Z \ B| <= 2|Z|/3.
inline Separation balanced_z_separation(const Graph& g, const TreeDecompositionWitness& td, const VertexSet& z) {
  auto problem = tree_decomposition_problem(g, td);
  if (!problem.empty()) throw PreconditionError("balanced_z_separation: invalid tree decomposition: " + problem);
  require(is_normalized(z), "balanced_z_separation: z must be a sorted set");
  for (Vertex v : z) require(g.valid(v), "balanced_z_separation: z vertex out of range");
  return detail::centroid_separation(g, td, iota_set(g.order()), z);
}

struct SplitResult {
  VertexSet c;
  std::vector<VertexSet> parts;
  long s = 0;
  long p = 0;
  long k = 0;
  bool normalized = false;
};

/// Repeatedly splits the earliest-created part X with |X n (C u W)| > s by a
/// balanced separation of G[X] for Z = X n (C u W); the two sides replace X
/// at the end of the list and the separator joins C.
inline SplitResult iterated_split(const Graph& g, const TreeDecompositionWitness& td, const VertexSet& w, long s, long p, long k) {
  require(k >= 1 && p >= 1, "iterated_split needs positive k and p");
  if (s < 12 * k) throw PreconditionError("iterated_split needs s >= 12k");
  if (static_cast<long>(w.size()) > p * s) throw PreconditionError("iterated_split needs |W| <= ps");
  if (td.width >= k) throw PreconditionError("iterated_split needs a decomposition of width < k");
  auto problem = tree_decomposition_problem(g, td);
  if (!problem.empty()) throw PreconditionError("iterated_split: invalid tree decomposition: " + problem);
  SplitResult r;
  r.s = s;
  r.p = p;
  r.k = k;
  r.parts.push_back(iota_set(g.order()));
  const long max_steps = 6 * p;
  for (long step = 0;; ++step) {
    VertexSet cw = set_union(r.c, w);
    std::size_t pick = r.parts.size();
    for (std::size_t i = 0; i < r.parts.size(); ++i) {
      if (static_cast<long>(set_intersection(r.parts[i], cw).size()) > s) {
        pick = i;
        break;
      }
    }
    if (pick == r.parts.size()) break;
    if (step > max_steps) throw VerificationError("iterated_split did not stop within 6p steps");
    VertexSet x = r.parts[pick];
    auto sep = detail::centroid_separation(g, td, x, set_intersection(x, cw));
    r.parts.erase(r.parts.begin() + static_cast<std::ptrdiff_t>(pick));
    r.c = set_union(r.c, set_intersection(sep.a, sep.b));
    r.parts.push_back(std::move(sep.a));
    r.parts.push_back(std::move(sep.b));
  }
  return r;
}

/// C := C \ W, E_i := A_i \ (C u W) with empty sets dropped, then vertices of
/// C whose neighbours all lie in a single E_i move into it, to a fixpoint.
inline SplitResult normalize_split(const SplitResult& r, const Graph& g, const VertexSet& w) {
  require(!r.normalized, "normalize_split expects a non-normalized split");
  SplitResult out = r;
  out.normalized = true;
  out.c = set_difference(r.c, w);
  VertexSet cw = set_union(out.c, w);
  out.parts.clear();
  for (const auto& a : r.parts) {
    VertexSet e = set_difference(a, cw);
    if (!e.empty()) out.parts.push_back(std::move(e));
  }
  std::vector<int> part_of(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t i = 0; i < out.parts.size(); ++i) {
    for (Vertex v : out.parts[i]) part_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex v : out.c) {
      if (g.degree(v) == 0) continue;
      int only = -2;
      for (Vertex x : g.neighbors(v)) {
        int pi = part_of[static_cast<std::size_t>(x)];
        if (pi < 0 || (only >= 0 && only != pi)) {
          only = -1;
          break;
        }
        only = pi;
      }
      if (only >= 0) {
        out.c.erase(std::find(out.c.begin(), out.c.end(), v));
        auto& e = out.parts[static_cast<std::size_t>(only)];
        e.insert(std::lower_bound(e.begin(), e.end(), v), v);
        part_of[static_cast<std::size_t>(v)] = only;
        changed = true;
        break;
      }
    }
  }
  return out;
}

/// Independent check of the split conditions; returns the first violated
/// condition or an empty string.
inline std::string split_problem(const Graph& g, const VertexSet& w, const SplitResult& r) {
  if (static_cast<long>(r.c.size()) >= 6 * r.p * r.k) return "(i) |C| >= 6pk";
  if (static_cast<long>(r.parts.size()) >= 6 * r.p) return "t >= 6p";
  VertexSet cw = set_union(r.c, w);
  const int n = g.order();
  if (!r.normalized) {
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (const auto& a : r.parts) {
      if (a.empty()) return "empty part";
      if (static_cast<long>(set_intersection(a, cw).size()) > r.s) return "(ii) part meets C u W in more than s vertices";
      for (Vertex v : a) ++count[static_cast<std::size_t>(v)];
    }
    for (Vertex v = 0; v < n; ++v) {
      if (count[static_cast<std::size_t>(v)] == 0) return "(iii) vertex in no part";
      if (count[static_cast<std::size_t>(v)] > 1 && !contains(r.c, v)) return "(iv) parts overlap outside C";
    }
    for (auto [u, v] : g.edges()) {
      bool inside = false;
      for (const auto& a : r.parts) {
        if (contains(a, u) && contains(a, v)) {
          inside = true;
          break;
        }
      }
      if (!inside) return "(iii) edge in no part";
    }
    return {};
  }
  if (!disjoint(r.c, w)) return "C meets W";
  std::vector<int> part_of(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < r.parts.size(); ++i) {
    if (r.parts[i].empty()) return "empty part";
    for (Vertex v : r.parts[i]) {
      if (part_of[static_cast<std::size_t>(v)] >= 0 || contains(cw, v)) return "parts do not partition V \\ (C u W)";
      part_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (part_of[static_cast<std::size_t>(v)] < 0 && !contains(cw, v)) return "parts do not cover V \\ (C u W)";
  }
  for (const auto& e : r.parts) {
    if (static_cast<long>(set_intersection(neighborhood(g, e), cw).size()) > r.s) return "(ii) more than s vertices of C u W see a part";
  }
  for (Vertex v : r.c) {
    if (g.degree(v) == 0) continue;
    bool sees_cw = false;
    VertexSet seen_parts;
    for (Vertex x : g.neighbors(v)) {
      if (contains(cw, x)) sees_cw = true;
      if (part_of[static_cast<std::size_t>(x)] >= 0) seen_parts.push_back(part_of[static_cast<std::size_t>(x)]);
    }
    if (!sees_cw && normalized(seen_parts).size() < 2) return "(iii) vertex of C sees a single part only";
  }
  for (auto [u, v] : g.edges()) {
    int pu = part_of[static_cast<std::size_t>(u)];
    int pv = part_of[static_cast<std::size_t>(v)];
    if (pu >= 0 && pv >= 0 && pu != pv) return "(iv) edge between two parts";
  }
  return {};
}

}  // namespace fragile
