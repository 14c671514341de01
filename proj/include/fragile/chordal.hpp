#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "fragile/graph.hpp"

namespace fragile {

/// Permutation of vertex ids. In a perfect ordering the neighbours of each
/// vertex that precede it form a clique.
using EliminationOrdering = std::vector<Vertex>;

struct McsResult {
  EliminationOrdering order;
  bool chordal = false;
};

inline std::vector<int> positions_of(const EliminationOrdering& order) {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return pos;
}

/// Neighbours of v that precede it in `order`, sorted.
inline VertexSet earlier_neighbors(const Graph& g, const std::vector<int>& pos, Vertex v) {
  VertexSet out;
  for (Vertex w : g.neighbors(v)) {
    if (pos[static_cast<std::size_t>(w)] < pos[static_cast<std::size_t>(v)]) out.push_back(w);
  }
  return out;
}

/// Checks directly that the earlier neighbours of every vertex form a clique.
inline bool is_perfect_ordering(const Graph& g, const EliminationOrdering& order) {
  if (static_cast<int>(order.size()) != g.order()) return false;
  auto pos = positions_of(order);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (!is_clique(g, earlier_neighbors(g, pos, v))) return false;
  }
  return true;
}

/// Maximum-cardinality search, ties broken by the smallest id.
inline McsResult mcs_ordering(const Graph& g) {
  const int n = g.order();
  std::vector<int> weight(static_cast<std::size_t>(n), 0);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::set<std::pair<int, Vertex>> queue;  // (-weight, id)
  for (Vertex v = 0; v < n; ++v) queue.emplace(0, v);
  McsResult out;
  out.order.reserve(static_cast<std::size_t>(n));
  while (!queue.empty()) {
    Vertex v = queue.begin()->second;
    queue.erase(queue.begin());
    done[static_cast<std::size_t>(v)] = 1;
    out.order.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (done[static_cast<std::size_t>(w)]) continue;
      auto& wt = weight[static_cast<std::size_t>(w)];
      queue.erase({-wt, w});
      ++wt;
      queue.emplace(-wt, w);
    }
  }
  out.chordal = is_perfect_ordering(g, out.order);
  return out;
}

inline bool is_chordal(const Graph& g) { return mcs_ordering(g).chordal; }

/// Clique number of a chordal graph given a perfect ordering.
inline int clique_number(const Graph& g, const EliminationOrdering& order) {
  if (g.order() == 0) return 0;
  auto pos = positions_of(order);
  int best = 1;
  for (Vertex v = 0; v < g.order(); ++v) {
    best = std::max(best, 1 + static_cast<int>(earlier_neighbors(g, pos, v).size()));
  }
  return best;
}

struct Chordalization {
  Graph graph;
  EliminationOrdering order;  // perfect ordering of `graph`
};

enum class EliminationRule { MinFill, MinDegree };

/// Greedy elimination, by fewest fill edges or by smallest current degree
/// (ties: smallest id); the returned ordering is the reverse of the
/// elimination sequence, so earlier neighbours form cliques.
inline Chordalization greedy_chordalize(const Graph& g, EliminationRule rule = EliminationRule::MinFill) {
  const int n = g.order();
  Chordalization out{Graph(n), {}};
  for (auto [u, v] : g.edges()) out.graph.add_edge(u, v);
  if (g.embedded()) out.graph.clear_rotation();
  std::vector<std::set<Vertex>> adj(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)].insert(g.neighbors(v).begin(), g.neighbors(v).end());
  auto fill_of = [&](Vertex v) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    if (rule == EliminationRule::MinDegree) return static_cast<long>(nb.size());
    long missing = 0;
    for (auto i = nb.begin(); i != nb.end(); ++i) {
      for (auto j = std::next(i); j != nb.end(); ++j) {
        if (!adj[static_cast<std::size_t>(*i)].count(*j)) ++missing;
      }
    }
    return missing;
  };
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<long> fill(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) fill[static_cast<std::size_t>(v)] = fill_of(v);
  std::vector<Vertex> eliminated;
  for (int step = 0; step < n; ++step) {
    Vertex best = -1;
    for (Vertex v = 0; v < n; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      if (best < 0 || fill[static_cast<std::size_t>(v)] < fill[static_cast<std::size_t>(best)]) best = v;
    }
    std::vector<Vertex> nb(adj[static_cast<std::size_t>(best)].begin(), adj[static_cast<std::size_t>(best)].end());
    std::set<Vertex> touched(nb.begin(), nb.end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (adj[static_cast<std::size_t>(nb[i])].insert(nb[j]).second) {
          adj[static_cast<std::size_t>(nb[j])].insert(nb[i]);
          out.graph.add_edge(nb[i], nb[j]);
          for (Vertex x : adj[static_cast<std::size_t>(nb[i])]) touched.insert(x);
          for (Vertex x : adj[static_cast<std::size_t>(nb[j])]) touched.insert(x);
        }
      }
    }
    for (Vertex w : nb) adj[static_cast<std::size_t>(w)].erase(best);
    adj[static_cast<std::size_t>(best)].clear();
    gone[static_cast<std::size_t>(best)] = 1;
    eliminated.push_back(best);
    for (Vertex x : touched) {
      if (!gone[static_cast<std::size_t>(x)]) fill[static_cast<std::size_t>(x)] = fill_of(x);
    }
  }
  out.order.assign(eliminated.rbegin(), eliminated.rend());
  if (!is_perfect_ordering(out.graph, out.order)) throw VerificationError("greedy_chordalize produced a non-chordal graph");
  return out;
}

/// Restriction of an ordering to a vertex subset, translated to the local ids
/// of `sub`.
inline EliminationOrdering restrict_ordering(const EliminationOrdering& order, const Subgraph& sub) {
  EliminationOrdering out;
  out.reserve(sub.to_parent.size());
  for (Vertex v : order) {
    Vertex l = sub.local(v);
    if (l >= 0) out.push_back(l);
  }
  return out;
}

}  // namespace fragile
