#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/plane.hpp"

namespace fragile::gen {

inline Graph path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  Graph::Rotation rot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i > 0) rot[static_cast<std::size_t>(i)].push_back(i - 1);
    if (i + 1 < n) rot[static_cast<std::size_t>(i)].push_back(i + 1);
  }
  g.set_rotation(std::move(rot));
  return g;
}

inline Graph cycle(int n) {
  require(n >= 3, "cycle needs n >= 3");
  Graph g(n);
  Graph::Rotation rot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    g.add_edge(i, (i + 1) % n);
    rot[static_cast<std::size_t>(i)] = {(i + n - 1) % n, (i + 1) % n};
  }
  g.set_rotation(std::move(rot));
  return g;
}

inline Graph clique(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

/// Embedded K4: outer triangle 0,1,2 with 3 inside.
inline Graph k4_embedded() {
  Graph g = clique(4);
  g.set_rotation({{1, 3, 2}, {2, 3, 0}, {0, 3, 1}, {0, 1, 2}});
  return g;
}

inline Graph k3_embedded() {
  Graph g = clique(3);
  g.set_rotation({{1, 2}, {2, 0}, {0, 1}});
  return g;
}

/// rows x cols grid, vertex r*cols+c; rotation up, right, down, left.
inline Graph grid(int rows, int cols) {
  Graph g(rows * cols);
  Graph::Rotation rot(static_cast<std::size_t>(rows * cols));
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
      auto& rv = rot[static_cast<std::size_t>(id(r, c))];
      if (r > 0) rv.push_back(id(r - 1, c));
      if (c + 1 < cols) rv.push_back(id(r, c + 1));
      if (r + 1 < rows) rv.push_back(id(r + 1, c));
      if (c > 0) rv.push_back(id(r, c - 1));
    }
  }
  g.set_rotation(std::move(rot));
  return g;
}

/// Fan: path 1..n-1 plus apex 0 adjacent to all of it (outerplanar).
inline Graph fan(int n) {
  require(n >= 2, "fan needs n >= 2");
  Graph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(0, i);
  for (int i = 1; i + 1 < n; ++i) g.add_edge(i, i + 1);
  Graph::Rotation rot(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) rot[0].push_back(i);
  for (int i = 1; i < n; ++i) {
    auto& r = rot[static_cast<std::size_t>(i)];
    // apex, then right neighbour, then left neighbour, keeping the apex side consistent
    r.push_back(0);
    if (i > 1) r.push_back(i - 1);
    if (i + 1 < n) r.push_back(i + 1);
  }
  g.set_rotation(std::move(rot));
  return g;
}

inline Graph octahedron() {
  // poles 0 and 5, equator 1,2,3,4 in cyclic order
  Graph g(6);
  for (int i = 1; i <= 4; ++i) {
    g.add_edge(0, i);
    g.add_edge(5, i);
    g.add_edge(i, i % 4 + 1);
  }
  Graph::Rotation rot(6);
  rot[0] = {1, 2, 3, 4};
  rot[5] = {4, 3, 2, 1};
  for (int i = 1; i <= 4; ++i) {
    int next = i % 4 + 1;
    int prev = (i + 2) % 4 + 1;
    rot[static_cast<std::size_t>(i)] = {0, prev, 5, next};
  }
  g.set_rotation(std::move(rot));
  return g;
}

/// Complete rooted tree in which every internal vertex has `arity` children;
/// vertices in breadth-first order, root 0. Embedded.
inline Graph complete_tree(int arity, int depth) {
  std::vector<std::pair<int, int>> edges;
  int n = 1;
  int level_start = 0;
  int level_size = 1;
  for (int d = 0; d < depth; ++d) {
    for (int i = 0; i < level_size; ++i) {
      for (int c = 0; c < arity; ++c) edges.emplace_back(level_start + i, n++);
    }
    level_start += level_size;
    level_size *= arity;
  }
  Graph g(n);
  Graph::Rotation rot(static_cast<std::size_t>(n));
  for (auto [p, c] : edges) {
    g.add_edge(p, c);
    rot[static_cast<std::size_t>(c)].push_back(p);
  }
  for (auto [p, c] : edges) rot[static_cast<std::size_t>(p)].push_back(c);
  g.set_rotation(std::move(rot));
  return g;
}

/// Random tree with maximum degree at most max_degree; embedded with
/// arbitrary rotation order.
inline Graph random_tree(std::mt19937_64& rng, int n, int max_degree) {
  require(max_degree >= 2 || n <= 2, "random_tree needs max_degree >= 2");
  Graph g(n);
  std::vector<Vertex> open;
  if (n > 0) open.push_back(0);
  for (int v = 1; v < n; ++v) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    Vertex p = open[i];
    g.add_edge(p, v);
    if (g.degree(p) >= max_degree) {
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
    }
    open.push_back(v);
  }
  Graph::Rotation rot(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) rot[static_cast<std::size_t>(v)] = g.neighbors(v);
  g.set_rotation(std::move(rot));
  return g;
}

/// Random series-parallel graph of maximum degree at most max_degree (>= 3):
/// starts from an edge and repeatedly subdivides an edge or adds a parallel
/// path of length two to an edge whose ends have spare degree.
inline Graph random_series_parallel(std::mt19937_64& rng, int n, int max_degree) {
  require(n >= 2 && max_degree >= 3, "random_series_parallel needs n >= 2, max_degree >= 3");
  std::vector<std::pair<int, int>> edges{{0, 1}};
  std::vector<int> deg{1, 1};
  int count = 2;
  while (count < n) {
    std::size_t e = std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng);
    auto [u, v] = edges[e];
    bool parallel = std::bernoulli_distribution(0.4)(rng);
    int w = count++;
    deg.push_back(2);
    if (parallel && deg[static_cast<std::size_t>(u)] < max_degree && deg[static_cast<std::size_t>(v)] < max_degree) {
      edges.emplace_back(u, w);
      edges.emplace_back(w, v);
      ++deg[static_cast<std::size_t>(u)];
      ++deg[static_cast<std::size_t>(v)];
    } else {
      edges[e] = {u, w};
      edges.emplace_back(w, v);
    }
  }
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

/// Random stacked triangulation (repeated face subdivision of a triangle)
/// followed by random edge flips. Embedded; n >= 3.
inline Graph random_triangulation(std::mt19937_64& rng, int n, int flips) {
  require(n >= 3, "random_triangulation needs n >= 3");
  PlaneGraph pg(k3_embedded());
  for (int v = 3; v < n; ++v) {
    auto faces = pg.faces();
    std::size_t f = std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng);
    stack_into_face(pg, faces[f].front());
  }
  for (int i = 0; i < flips; ++i) {
    std::vector<int> darts;
    for (Vertex v = 0; v < pg.vertex_slots(); ++v) {
      for (int d : pg.rotation(v)) {
        if ((d & 1) == 0) darts.push_back(d);
      }
    }
    std::sort(darts.begin(), darts.end());
    int d = darts[std::uniform_int_distribution<std::size_t>(0, darts.size() - 1)(rng)];
    flip_edge(pg, d);
  }
  return pg.to_graph();
}

/// Stacked triangulation without flips; it is chordal and planar.
inline Graph stacked_triangulation(std::mt19937_64& rng, int n) { return random_triangulation(rng, n, 0); }

}  // namespace fragile::gen
