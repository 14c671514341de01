#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fragile/graph.hpp"

namespace fragile {

/// Dart-based rotation system that tolerates transient parallel edges.
///
/// Darts 2e and 2e+1 are the two orientations of edge e. rot[v] lists the
/// darts leaving v in clockwise order. The face to the left of dart d
/// continues with face_next(d), the clockwise successor of twin(d) at its tail.
class PlaneGraph {
 public:
  PlaneGraph() = default;

  explicit PlaneGraph(const Graph& g) : rot_(static_cast<std::size_t>(g.order())), alive_(static_cast<std::size_t>(g.order()), 1) {
    if (!g.embedded()) throw PreconditionError("graph has no embedding");
    std::vector<std::vector<std::pair<Vertex, int>>> out(static_cast<std::size_t>(g.order()));
    for (auto [u, v] : g.edges()) {
      int d = new_edge(u, v);
      out[static_cast<std::size_t>(u)].emplace_back(v, d);
      out[static_cast<std::size_t>(v)].emplace_back(u, d ^ 1);
    }
    for (Vertex v = 0; v < g.order(); ++v) {
      auto& lst = out[static_cast<std::size_t>(v)];
      std::sort(lst.begin(), lst.end());
      for (Vertex w : (*g.rotation())[static_cast<std::size_t>(v)]) {
        auto it = std::lower_bound(lst.begin(), lst.end(), std::make_pair(w, -1));
        if (it == lst.end() || it->first != w) throw PreconditionError("rotation lists a non-neighbour");
        rot_[static_cast<std::size_t>(v)].push_back(it->second);
      }
      if (rot_[static_cast<std::size_t>(v)].size() != lst.size()) throw PreconditionError("rotation is not a permutation of the neighbourhood");
    }
  }

  int vertex_slots() const { return static_cast<int>(rot_.size()); }
  bool alive(Vertex v) const { return alive_[static_cast<std::size_t>(v)] != 0; }
  static int twin(int d) { return d ^ 1; }
  Vertex tail(int d) const { return tail_[static_cast<std::size_t>(d)]; }
  Vertex head(int d) const { return tail_[static_cast<std::size_t>(d ^ 1)]; }
  bool dart_alive(int d) const { return tail_[static_cast<std::size_t>(d)] >= 0; }
  const std::vector<int>& rotation(Vertex v) const { return rot_[static_cast<std::size_t>(v)]; }

  int cw_next(int d) const {
    const auto& r = rot_[static_cast<std::size_t>(tail(d))];
    auto i = static_cast<std::size_t>(std::find(r.begin(), r.end(), d) - r.begin());
    return r[(i + 1) % r.size()];
  }

  int face_next(int d) const { return cw_next(twin(d)); }

  /// Every face as its cyclic dart sequence; faces listed by smallest dart.
  std::vector<std::vector<int>> faces() const {
    std::vector<char> seen(tail_.size(), 0);
    std::vector<std::vector<int>> out;
    for (int d = 0; d < static_cast<int>(tail_.size()); ++d) {
      if (!dart_alive(d) || seen[static_cast<std::size_t>(d)]) continue;
      std::vector<int> f;
      int e = d;
      do {
        seen[static_cast<std::size_t>(e)] = 1;
        f.push_back(e);
        e = face_next(e);
      } while (e != d);
      out.push_back(std::move(f));
    }
    return out;
  }

  Vertex add_vertex() {
    rot_.emplace_back();
    alive_.push_back(1);
    return static_cast<Vertex>(rot_.size() - 1);
  }

  /// Adds edge u-v with dart u->v placed clockwise right after `after_u` at u
  /// (or as the only dart when u has none), and likewise at v. Returns the
  /// dart u->v.
  int add_edge(Vertex u, int after_u, Vertex v, int after_v) {
    int d = new_edge(u, v);
    insert_after(u, after_u, d);
    insert_after(v, after_v, d ^ 1);
    return d;
  }

  void remove_edge(int d) {
    for (int x : {d, d ^ 1}) {
      auto& r = rot_[static_cast<std::size_t>(tail(x))];
      r.erase(std::find(r.begin(), r.end(), x));
    }
    tail_[static_cast<std::size_t>(d)] = -1;
    tail_[static_cast<std::size_t>(d ^ 1)] = -1;
  }

  /// Inserts a chord between positions i < j of face walk `f` (f[k] is the
  /// dart w_k -> w_{k+1}). Returns the new dart w_i -> w_j.
  int add_chord(const std::vector<int>& f, std::size_t i, std::size_t j) {
    const std::size_t len = f.size();
    int before_i = twin(f[(i + len - 1) % len]);
    int before_j = twin(f[(j + len - 1) % len]);
    return add_edge(tail(f[i]), before_i, tail(f[j]), before_j);
  }

  /// Contracts the edge of dart d (u -> w) into u, then removes loops and
  /// parallel edges at u.
  void contract(int d) {
    Vertex u = tail(d);
    Vertex w = head(d);
    auto& ru = rot_[static_cast<std::size_t>(u)];
    auto& rw = rot_[static_cast<std::size_t>(w)];
    auto iw = static_cast<std::size_t>(std::find(rw.begin(), rw.end(), d ^ 1) - rw.begin());
    std::vector<int> moved;
    for (std::size_t k = 1; k < rw.size(); ++k) moved.push_back(rw[(iw + k) % rw.size()]);
    for (int x : moved) tail_[static_cast<std::size_t>(x)] = u;
    auto iu = std::find(ru.begin(), ru.end(), d);
    iu = ru.erase(iu);
    ru.insert(iu, moved.begin(), moved.end());
    rw.clear();
    alive_[static_cast<std::size_t>(w)] = 0;
    tail_[static_cast<std::size_t>(d)] = -1;
    tail_[static_cast<std::size_t>(d ^ 1)] = -1;
    simplify_at(u);
  }

  void remove_vertex(Vertex v) {
    while (!rot_[static_cast<std::size_t>(v)].empty()) remove_edge(rot_[static_cast<std::size_t>(v)].front());
    alive_[static_cast<std::size_t>(v)] = 0;
  }

  bool has_edge(Vertex u, Vertex v) const {
    for (int d : rot_[static_cast<std::size_t>(u)]) {
      if (head(d) == v) return true;
    }
    return false;
  }

  /// Converts back to a simple embedded Graph over the live vertices,
  /// renumbered in increasing order; `ids` receives the old id of each new one.
  Graph to_graph(std::vector<Vertex>* ids = nullptr) const {
    std::vector<Vertex> newid(rot_.size(), -1);
    std::vector<Vertex> old;
    for (std::size_t v = 0; v < rot_.size(); ++v) {
      if (alive_[v]) {
        newid[v] = static_cast<Vertex>(old.size());
        old.push_back(static_cast<Vertex>(v));
      }
    }
    Graph g(static_cast<int>(old.size()));
    Graph::Rotation rot(old.size());
    for (std::size_t i = 0; i < old.size(); ++i) {
      for (int d : rot_[static_cast<std::size_t>(old[i])]) {
        Vertex h = newid[static_cast<std::size_t>(head(d))];
        rot[i].push_back(h);
        if (static_cast<Vertex>(i) < h) g.add_edge(static_cast<Vertex>(i), h);
      }
    }
    g.set_rotation(std::move(rot));
    if (ids != nullptr) *ids = std::move(old);
    return g;
  }

 private:
  int new_edge(Vertex u, Vertex v) {
    int d = static_cast<int>(tail_.size());
    tail_.push_back(u);
    tail_.push_back(v);
    return d;
  }

  void insert_after(Vertex v, int after, int d) {
    auto& r = rot_[static_cast<std::size_t>(v)];
    if (after < 0 || r.empty()) {
      r.push_back(d);
      return;
    }
    auto it = std::find(r.begin(), r.end(), after);
    if (it == r.end()) throw PreconditionError("insertion anchor is not at the vertex");
    r.insert(std::next(it), d);
  }

  void simplify_at(Vertex u) {
    std::set<Vertex> seen;
    std::vector<int> doomed;
    for (int d : rot_[static_cast<std::size_t>(u)]) {
      Vertex h = head(d);
      if (h == u) {
        if ((d & 1) == 0) doomed.push_back(d);
      } else if (!seen.insert(h).second) {
        doomed.push_back(d);
      }
    }
    for (int d : doomed) {
      if (dart_alive(d)) remove_edge(d);
    }
  }

  std::vector<Vertex> tail_;  // per dart; -1 once removed
  std::vector<std::vector<int>> rot_;
  std::vector<char> alive_;
};

/// Checks that the rotation system is a permutation of every neighbourhood
/// and that every connected component satisfies Euler's formula. Returns an
/// empty string when valid, otherwise a description of the first problem.
inline std::string embedding_problem(const Graph& g) {
  if (!g.embedded()) return "missing embedding";
  const auto& rot = *g.rotation();
  if (static_cast<int>(rot.size()) != g.order()) return "rotation system has wrong vertex count";
  for (Vertex v = 0; v < g.order(); ++v) {
    const auto& r = rot[static_cast<std::size_t>(v)];
    if (r.size() != g.neighbors(v).size() || normalized(r) != g.neighbors(v)) {
      return "rotation at vertex " + std::to_string(v) + " is not a permutation of its neighbours";
    }
  }
  PlaneGraph pg(g);
  auto comps = components(g);
  std::vector<int> comp_of(static_cast<std::size_t>(g.order()));
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (Vertex v : comps[c]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
  }
  std::vector<long> faces(comps.size(), 0);
  for (const auto& f : pg.faces()) ++faces[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(pg.tail(f.front()))])];
  for (std::size_t c = 0; c < comps.size(); ++c) {
    long nv = static_cast<long>(comps[c].size());
    long ne = 0;
    for (Vertex v : comps[c]) ne += g.degree(v);
    ne /= 2;
    long nf = ne == 0 ? 1 : faces[c];
    if (nv - ne + nf != 2) {
      return "Euler's formula fails on the component of vertex " + std::to_string(comps[c].front()) + " (n=" + std::to_string(nv) +
             ", m=" + std::to_string(ne) + ", f=" + std::to_string(nf) + ")";
    }
  }
  return {};
}

inline void validate_embedding(const Graph& g) {
  auto problem = embedding_problem(g);
  if (!problem.empty()) throw PreconditionError("invalid embedding: " + problem);
}

/// Adds chords until every face is a triangle. Input edges are kept.
inline void triangulate(PlaneGraph& pg) {
  for (;;) {
    auto faces = pg.faces();
    const std::vector<int>* big = nullptr;
    for (const auto& f : faces) {
      if (f.size() > 3) {
        big = &f;
        break;
      }
    }
    if (big == nullptr) return;
    const auto& f = *big;
    const std::size_t len = f.size();
    auto ok = [&](std::size_t i, std::size_t j) {
      Vertex a = pg.tail(f[i]);
      Vertex b = pg.tail(f[j]);
      return a != b && !pg.has_edge(a, b);
    };
    bool done = false;
    for (std::size_t i = 0; i < len && !done; ++i) {
      std::size_t j = (i + 2) % len;
      if (ok(i, j)) {
        pg.add_chord(f, std::min(i, j), std::max(i, j));
        done = true;
      }
    }
    for (std::size_t i = 0; i < len && !done; ++i) {
      for (std::size_t j = i + 2; j < len && !done; ++j) {
        if (i == 0 && j == len - 1) continue;
        if (ok(i, j)) {
          pg.add_chord(f, i, j);
          done = true;
        }
      }
    }
    if (!done) {
      std::string walk;
      for (int d : f) walk += std::to_string(pg.tail(d)) + " ";
      throw PreconditionError("cannot triangulate face without a multi-edge: " + walk);
    }
  }
}

/// Triangulation of a connected embedded graph with at least three vertices.
inline Graph triangulate_embedded(const Graph& g) {
  if (!g.embedded()) throw PreconditionError("triangulate_embedded: missing embedding");
  require(g.order() >= 3, "triangulate_embedded needs at least three vertices");
  require(is_connected(g), "triangulate_embedded needs a connected graph");
  validate_embedding(g);
  PlaneGraph pg(g);
  triangulate(pg);
  Graph out = pg.to_graph();
  validate_embedding(out);
  return out;
}

/// Inserts a new vertex into the triangular face whose walk starts with dart
/// d, joining it to the three corners.
inline Vertex stack_into_face(PlaneGraph& pg, int d) {
  int d0 = d;
  int d1 = pg.face_next(d0);
  int d2 = pg.face_next(d1);
  require(pg.face_next(d2) == d0, "stack_into_face needs a triangular face");
  Vertex u = pg.tail(d0);
  Vertex v = pg.tail(d1);
  Vertex w = pg.tail(d2);
  Vertex z = pg.add_vertex();
  int zw = PlaneGraph::twin(pg.add_edge(w, PlaneGraph::twin(d1), z, -1));
  int zv = PlaneGraph::twin(pg.add_edge(v, PlaneGraph::twin(d0), z, zw));
  pg.add_edge(u, PlaneGraph::twin(d2), z, zv);
  return z;
}

/// Flips the edge of dart d inside its two triangular faces when the result
/// stays simple and no endpoint drops below degree three. Returns whether
/// the flip happened.
inline bool flip_edge(PlaneGraph& pg, int d) {
  int a1 = pg.face_next(d);
  int a2 = pg.face_next(a1);
  int b1 = pg.face_next(PlaneGraph::twin(d));
  int b2 = pg.face_next(b1);
  if (pg.face_next(a2) != d || pg.face_next(b2) != PlaneGraph::twin(d)) return false;
  Vertex u = pg.tail(d);
  Vertex v = pg.head(d);
  Vertex w = pg.head(a1);
  Vertex z = pg.head(b1);
  if (w == z || pg.has_edge(w, z)) return false;
  if (pg.rotation(u).size() <= 3 || pg.rotation(v).size() <= 3) return false;
  pg.remove_edge(d);
  // quadrilateral walk starting at v: v->w, w->u, u->z, z->v
  std::vector<int> f{a1, a2, b1, b2};
  pg.add_chord(f, 1, 3);
  return true;
}

}  // namespace fragile
