#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "fragile/error.hpp"

namespace fragile {

using Vertex = int;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

inline VertexSet normalized(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool is_normalized(const VertexSet& s) {
  return std::adjacent_find(s.begin(), s.end(), [](Vertex a, Vertex b) { return a >= b; }) == s.end();
}

inline bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool disjoint(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

inline VertexSet iota_set(int n) {
  VertexSet s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

/// Undirected simple graph on ids 0..n-1 with an optional rotation system.
///
/// Adjacency lists are kept sorted. The rotation system, when present, lists
/// for every vertex its neighbours in clockwise order; it is validated by
/// `validate_embedding` in plane.hpp, not here.
class Graph {
 public:
  using Rotation = std::vector<std::vector<Vertex>>;

  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) { require(n >= 0, "negative vertex count"); }

  int order() const { return static_cast<int>(adj_.size()); }
  std::size_t size() const { return edge_count_; }
  bool valid(Vertex v) const { return v >= 0 && v < order(); }

  const VertexSet& neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

  int max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (!valid(u) || !valid(v)) return false;
    const auto& a = neighbors(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Inserts uv; returns false when the edge already exists.
  bool try_add_edge(Vertex u, Vertex v) {
    if (!valid(u) || !valid(v)) {
      throw PreconditionError("edge " + std::to_string(u) + " " + std::to_string(v) + " out of range");
    }
    if (u == v) throw PreconditionError("loop at vertex " + std::to_string(u));
    auto& au = adj_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adj_[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edge_count_;
    return true;
  }

  void add_edge(Vertex u, Vertex v) {
    if (!try_add_edge(u, v)) {
      throw PreconditionError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
  }

  /// Edges as (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  const std::optional<Rotation>& rotation() const { return rotation_; }
  bool embedded() const { return rotation_.has_value(); }
  void set_rotation(Rotation r) { rotation_ = std::move(r); }
  void clear_rotation() { rotation_.reset(); }

  bool operator==(const Graph& other) const = default;

 private:
  std::vector<VertexSet> adj_;
  std::size_t edge_count_ = 0;
  std::optional<Rotation> rotation_;
};

/// Induced subgraph with the map from local to parent ids.
struct Subgraph {
  Graph graph;
  VertexSet to_parent;  // local id i corresponds to parent vertex to_parent[i]

  Vertex local(Vertex parent) const {
    auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
    if (it == to_parent.end() || *it != parent) return -1;
    return static_cast<Vertex>(it - to_parent.begin());
  }

  VertexSet lift(const VertexSet& local_set) const {
    VertexSet out;
    out.reserve(local_set.size());
    for (Vertex v : local_set) out.push_back(to_parent[static_cast<std::size_t>(v)]);
    return out;  // to_parent is increasing, so order is preserved
  }
};

/// G[keep]. The rotation system is restricted when present; deleting vertices
/// from an embedded graph leaves a valid embedding.
inline Subgraph induced_subgraph(const Graph& g, const VertexSet& keep) {
  Subgraph sub;
  sub.to_parent = keep;
  std::vector<Vertex> loc(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) loc[static_cast<std::size_t>(keep[i])] = static_cast<Vertex>(i);
  sub.graph = Graph(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Vertex w : g.neighbors(keep[i])) {
      Vertex j = loc[static_cast<std::size_t>(w)];
      if (j > static_cast<Vertex>(i)) sub.graph.add_edge(static_cast<Vertex>(i), j);
    }
  }
  if (g.embedded()) {
    Graph::Rotation rot(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (Vertex w : (*g.rotation())[static_cast<std::size_t>(keep[i])]) {
        Vertex j = loc[static_cast<std::size_t>(w)];
        if (j >= 0) rot[i].push_back(j);
      }
    }
    sub.graph.set_rotation(std::move(rot));
  }
  return sub;
}

inline VertexSet complement(int n, const VertexSet& x) { return set_difference(iota_set(n), x); }

/// G - X as an induced subgraph.
inline Subgraph remove_vertices(const Graph& g, const VertexSet& x) { return induced_subgraph(g, complement(g.order(), x)); }

/// Connected components of G[within] (all of G when `within` is empty and
/// `whole` is true), each sorted, listed by smallest vertex.
inline std::vector<VertexSet> components_of(const Graph& g, const VertexSet& within) {
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  for (Vertex v : within) in[static_cast<std::size_t>(v)] = 1;
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  std::vector<VertexSet> comps;
  for (Vertex s : within) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    VertexSet comp;
    std::vector<Vertex> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (Vertex w : g.neighbors(u)) {
        if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::vector<VertexSet> components(const Graph& g) { return components_of(g, iota_set(g.order())); }

inline bool is_connected(const Graph& g) { return g.order() <= 1 || components(g).size() == 1; }

/// Hop distances from `source`; -1 for unreachable vertices.
inline std::vector<int> bfs_distances(const Graph& g, Vertex source) {
  require(g.valid(source), "bfs source out of range");
  std::vector<int> dist(static_cast<std::size_t>(g.order()), -1);
  std::queue<Vertex> q;
  dist[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex w : g.neighbors(u)) {  // ascending ids
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

/// BFS parents with ascending-id tie breaking (first discoverer wins); the
/// source is its own parent, unreachable vertices get -1.
inline std::vector<Vertex> bfs_parents(const Graph& g, Vertex source) {
  std::vector<Vertex> parent(static_cast<std::size_t>(g.order()), -1);
  std::queue<Vertex> q;
  parent[static_cast<std::size_t>(source)] = source;
  q.push(source);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex w : g.neighbors(u)) {
      if (parent[static_cast<std::size_t>(w)] < 0) {
        parent[static_cast<std::size_t>(w)] = u;
        q.push(w);
      }
    }
  }
  return parent;
}

/// Layers L_0 = {v}, L_i = vertices at distance exactly i. Requires a
/// connected graph.
inline std::vector<VertexSet> bfs_layers(const Graph& g, Vertex v) {
  auto dist = bfs_distances(g, v);
  int depth = 0;
  for (int d : dist) {
    if (d < 0) throw PreconditionError("bfs_layers: graph is disconnected");
    depth = std::max(depth, d);
  }
  std::vector<VertexSet> layers(static_cast<std::size_t>(depth + 1));
  for (Vertex u = 0; u < g.order(); ++u) layers[static_cast<std::size_t>(dist[static_cast<std::size_t>(u)])].push_back(u);
  return layers;
}

inline bool is_clique(const Graph& g, const VertexSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!g.has_edge(s[i], s[j])) return false;
    }
  }
  return true;
}

/// Vertices outside `s` with a neighbour in `s`.
inline VertexSet neighborhood(const Graph& g, const VertexSet& s) {
  VertexSet out;
  for (Vertex v : s) {
    for (Vertex w : g.neighbors(v)) {
      if (!contains(s, w)) out.push_back(w);
    }
  }
  return normalized(std::move(out));
}

}  // namespace fragile
