#pragma once

#include <string>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/parameters.hpp"
#include "fragile/plane.hpp"
#include "fragile/thin_dist.hpp"

namespace fragile {

/// Plane minor of a connected embedded host: the vertices at distance <= hi
/// from the root (the vertex at distance 0), with the ball of radius lo-1
/// contracted into the root when lo >= 1, triangulated when it has at least
/// three vertices.
struct WindowMinor {
  Graph graph;
  std::vector<Vertex> to_host;  // host vertex per local vertex (the root maps to the host root)
  Vertex root = 0;
  bool contracted = false;
};

inline WindowMinor window_minor(const Graph& host, const std::vector<int>& dist, int lo, int hi) {
  require(host.embedded(), "window_minor needs an embedded host");
  Vertex root = -1;
  VertexSet keep;
  for (Vertex v = 0; v < host.order(); ++v) {
    if (dist[static_cast<std::size_t>(v)] == 0) root = v;
    if (dist[static_cast<std::size_t>(v)] >= 0 && dist[static_cast<std::size_t>(v)] <= hi) keep.push_back(v);
  }
  require(root >= 0, "window_minor: no root");
  auto sub = induced_subgraph(host, keep);
  PlaneGraph pg(sub.graph);
  const Vertex root_local = sub.local(root);
  WindowMinor out;
  out.contracted = lo >= 1;
  if (out.contracted) {
    std::vector<std::pair<int, Vertex>> ball;
    for (Vertex v : keep) {
      int d = dist[static_cast<std::size_t>(v)];
      if (d >= 1 && d <= lo - 1) ball.emplace_back(d, v);
    }
    std::sort(ball.begin(), ball.end());
    for (auto [d, v] : ball) {
      Vertex w = sub.local(v);
      int dart = -1;
      for (int e : pg.rotation(root_local)) {
        if (pg.head(e) == w) {
          dart = e;
          break;
        }
      }
      require(dart >= 0, "window_minor: ball vertex not adjacent to the contracted root");
      pg.contract(dart);
    }
  }
  std::vector<Vertex> ids;
  Graph g = pg.to_graph(&ids);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.to_host.push_back(sub.to_parent[static_cast<std::size_t>(ids[i])]);
    if (ids[i] == root_local) out.root = static_cast<Vertex>(i);
  }
  if (g.order() >= 3) {
    PlaneGraph tri(g);
    triangulate(tri);
    g = tri.to_graph();
  }
  out.graph = std::move(g);
  return out;
}

/// Decomposition of a connected embedded triangulation whose bags are the
/// unions of the BFS-tree paths from the three corners of each face to the
/// root; the bag tree is the dual of the non-tree edges.
inline TreeDecompositionWitness tree_cotree_decomposition(const Graph& tri, Vertex root) {
  TreeDecompositionWitness td;
  if (tri.order() <= 2) {
    td.bags.push_back(iota_set(tri.order()));
    td.parent.push_back(-1);
    td.width = std::max(0, tri.order() - 1);
    return td;
  }
  auto par = bfs_parents(tri, root);
  PlaneGraph pg(tri);
  auto faces = pg.faces();
  std::vector<int> face_of(2 * static_cast<std::size_t>(tri.size()) + 2, -1);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int d : faces[f]) {
      if (static_cast<std::size_t>(d) >= face_of.size()) face_of.resize(static_cast<std::size_t>(d) + 1, -1);
      face_of[static_cast<std::size_t>(d)] = static_cast<int>(f);
    }
  }
  std::vector<std::vector<int>> dual(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int d : faces[f]) {
      Vertex u = pg.tail(d);
      Vertex v = pg.head(d);
      if (par[static_cast<std::size_t>(u)] == v || par[static_cast<std::size_t>(v)] == u) continue;
      dual[f].push_back(face_of[static_cast<std::size_t>(d ^ 1)]);
    }
  }
  td.parent.assign(faces.size(), -2);
  td.parent[0] = -1;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (int h : dual[static_cast<std::size_t>(queue[qi])]) {
      if (td.parent[static_cast<std::size_t>(h)] == -2) {
        td.parent[static_cast<std::size_t>(h)] = queue[qi];
        queue.push_back(h);
      }
    }
  }
  td.width = 0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (td.parent[f] == -2) throw VerificationError("tree_cotree_decomposition: dual of the cotree is disconnected");
    VertexSet bag;
    for (int d : faces[f]) {
      for (Vertex v = pg.tail(d); v >= 0; v = par[static_cast<std::size_t>(v)]) {
        bag.push_back(v);
        if (v == root) break;
      }
    }
    td.bags.push_back(normalized(std::move(bag)));
    td.width = std::max(td.width, static_cast<int>(td.bags.back().size()) - 1);
  }
  return td;
}

/// Maps bags through `to_host`, keeps only vertices of `keep` (host ids).
inline TreeDecompositionWitness project_decomposition(const TreeDecompositionWitness& td, const std::vector<Vertex>& to_host,
                                                      const VertexSet& keep) {
  TreeDecompositionWitness out;
  out.parent = td.parent;
  out.width = 0;
  for (const auto& bag : td.bags) {
    VertexSet b;
    for (Vertex v : bag) {
      Vertex h = to_host[static_cast<std::size_t>(v)];
      if (contains(keep, h)) b.push_back(h);
    }
    b = normalized(std::move(b));
    out.width = std::max(out.width, static_cast<int>(b.size()) - 1);
    out.bags.push_back(std::move(b));
  }
  return out;
}

/// Relabels a decomposition over host ids to the local ids of `sub`.
inline TreeDecompositionWitness localize_decomposition(const TreeDecompositionWitness& td, const Subgraph& sub) {
  TreeDecompositionWitness out = td;
  for (auto& bag : out.bags) {
    VertexSet b;
    for (Vertex v : bag) {
      Vertex l = sub.local(v);
      require(l >= 0, "localize_decomposition: bag vertex outside the subgraph");
      b.push_back(l);
    }
    bag = std::move(b);
  }
  return out;
}

struct ComponentCertificate {
  VertexSet vertices;                // global ids
  TreeDecompositionWitness td;       // global ids
  int width = 0;                     // certified treewidth upper bound
  std::string method;                // min-fill | tree-cotree | exact
};

struct LayeringResult {
  ThinDistribution dist;
  long bound = 0;
  std::vector<VertexSet> classes;
  std::vector<std::vector<ComponentCertificate>> certificates;  // per class
};

/// X_i = BFS layers congruent to i mod a, per component of g from its
/// lowest vertex. Every component of G - X_i gets a decomposition of width at
/// most 3a-3: min-fill first, then the tree-cotree decomposition of its
/// window when g is embedded, then exact treewidth for at most 10 vertices.
inline LayeringResult planar_tw_layering(const Graph& g, int a) {
  if (a < 1) throw PreconditionError("planar_tw_layering needs a >= 1");
  const int n = g.order();
  const long limit = 3L * a - 3;
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
  auto comps = components(g);
  std::vector<Subgraph> comp_subs;
  std::vector<std::vector<int>> comp_dist;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    comp_subs.push_back(induced_subgraph(g, comps[c]));
    comp_dist.push_back(bfs_distances(comp_subs.back().graph, 0));
    for (std::size_t i = 0; i < comps[c].size(); ++i) {
      dist[static_cast<std::size_t>(comps[c][i])] = comp_dist.back()[i];
      comp_of[static_cast<std::size_t>(comps[c][i])] = static_cast<int>(c);
    }
  }
  LayeringResult out;
  out.bound = limit;
  out.classes.assign(static_cast<std::size_t>(a), {});
  for (Vertex v = 0; v < n; ++v) out.classes[static_cast<std::size_t>(dist[static_cast<std::size_t>(v)] % a)].push_back(v);
  out.dist = uniform_on_disjoint(out.classes, a);
  out.certificates.resize(static_cast<std::size_t>(a));
  for (int i = 0; i < a; ++i) {
    const auto& x = out.classes[static_cast<std::size_t>(i)];
    for (const auto& c : components_of(g, set_difference(iota_set(n), x))) {
      ComponentCertificate cert;
      cert.vertices = c;
      auto sub = induced_subgraph(g, c);
      auto mf = treewidth_upper(sub.graph);
      TreeDecompositionWitness best = mf.witness;
      cert.method = "min-fill";
      if (mf.value > limit && g.embedded()) {
        const int host = comp_of[static_cast<std::size_t>(c.front())];
        int low = dist[static_cast<std::size_t>(c.front())];
        for (Vertex v : c) low = std::min(low, dist[static_cast<std::size_t>(v)]);
        int lo = 0;
        for (int l = low; l >= 0; --l) {
          if (l % a == i) {
            lo = l + 1;
            break;
          }
        }
        auto minor = window_minor(comp_subs[static_cast<std::size_t>(host)].graph, comp_dist[static_cast<std::size_t>(host)], lo, lo + a - 2);
        std::vector<Vertex> to_global;
        for (Vertex v : minor.to_host) to_global.push_back(comp_subs[static_cast<std::size_t>(host)].to_parent[static_cast<std::size_t>(v)]);
        auto tc = tree_cotree_decomposition(minor.graph, minor.root);
        VertexSet keep = c;
        if (minor.contracted) keep = set_difference(keep, {to_global[static_cast<std::size_t>(minor.root)]});
        auto projected = localize_decomposition(project_decomposition(tc, to_global, keep), sub);
        if (tree_decomposition_problem(sub.graph, projected).empty() && projected.width < best.width) {
          best = projected;
          cert.method = "tree-cotree";
        }
      }
      cert.width = best.width;
      if (cert.width > limit && c.size() <= 10) {
        int exact = exact_treewidth(sub.graph);
        if (exact <= limit) {
          cert.width = exact;
          cert.method = "exact";
        }
      }
      if (cert.width > limit) {
        throw VerificationError("planar_tw_layering: component of G - X_" + std::to_string(i) + " has no decomposition of width <= " +
                                std::to_string(limit) + " (best " + std::to_string(cert.width) + ")");
      }
      cert.td = best;
      for (auto& bag : cert.td.bags) bag = sub.lift(bag);
      out.certificates[static_cast<std::size_t>(i)].push_back(std::move(cert));
    }
  }
  return out;
}

}  // namespace fragile
