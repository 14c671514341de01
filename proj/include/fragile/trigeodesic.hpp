#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fragile/chordal.hpp"
#include "fragile/graph.hpp"
#include "fragile/plane.hpp"

namespace fragile {

struct TrigeodesicPartition {
  std::vector<VertexSet> parts;
  std::vector<std::vector<std::vector<Vertex>>> geodesics;  // per part, at most three vertex sequences
  std::vector<int> part_of;
  Graph quotient;
};

inline Graph quotient_graph(const Graph& g, const std::vector<int>& part_of, int parts) {
  Graph q(parts);
  for (auto [u, v] : g.edges()) {
    int a = part_of[static_cast<std::size_t>(u)];
    int b = part_of[static_cast<std::size_t>(v)];
    if (a != b) q.try_add_edge(a, b);
  }
  return q;
}

/// Checks the partition, connectivity, geodesic covers and the chordal
/// quotient with clique number at most 4; empty string when valid.
inline std::string trigeodesic_problem(const Graph& g, const TrigeodesicPartition& p) {
  const int n = g.order();
  std::vector<int> seen(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    const auto& part = p.parts[i];
    if (part.empty()) return "empty part";
    for (Vertex v : part) {
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)] >= 0) return "parts do not partition the vertices";
      seen[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    if (components_of(g, part).size() != 1) return "part " + std::to_string(i) + " is disconnected";
    if (p.geodesics[i].size() > 3) return "part " + std::to_string(i) + " has more than three geodesics";
    VertexSet covered;
    for (const auto& seq : p.geodesics[i]) {
      if (seq.empty()) return "empty geodesic";
      auto dist = bfs_distances(g, seq.front());
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (dist[static_cast<std::size_t>(seq[k])] != static_cast<int>(k)) return "sequence in part " + std::to_string(i) + " is not a geodesic";
      }
      covered.insert(covered.end(), seq.begin(), seq.end());
    }
    if (normalized(covered) != part) return "geodesics do not cover part " + std::to_string(i);
  }
  for (Vertex v = 0; v < n; ++v) {
    if (seen[static_cast<std::size_t>(v)] < 0) return "vertex " + std::to_string(v) + " in no part";
  }
  Graph q = quotient_graph(g, seen, static_cast<int>(p.parts.size()));
  if (!(q == p.quotient)) return "stored quotient differs";
  auto mcs = mcs_ordering(q);
  if (!mcs.chordal) return "quotient is not chordal";
  if (clique_number(q, mcs.order) > 4) return "quotient has a clique of order > 4";
  return {};
}

/// Tripod decomposition of an embedded triangulation over the BFS tree from
/// `root`. The first part is the first face at the root; every region is a
/// disk bounded by at most three parts, split by the legs from a
/// trichromatic face up to the boundary.
inline TrigeodesicPartition trigeodesic_partition(const Graph& g, Vertex root = 0) {
  if (!g.embedded()) throw PreconditionError("trigeodesic_partition needs an embedded graph");
  const int n = g.order();
  TrigeodesicPartition out;
  out.part_of.assign(static_cast<std::size_t>(n), -1);
  if (n <= 2) {
    if (n > 0) {
      out.parts.push_back(iota_set(n));
      std::vector<Vertex> seq;
      for (Vertex v = 0; v < n; ++v) seq.push_back(v);
      out.geodesics.push_back({seq});
      for (Vertex v = 0; v < n; ++v) out.part_of[static_cast<std::size_t>(v)] = 0;
    }
    out.quotient = quotient_graph(g, out.part_of, static_cast<int>(out.parts.size()));
    return out;
  }
  validate_embedding(g);
  require(is_connected(g), "trigeodesic_partition needs a connected graph");
  PlaneGraph pg(g);
  auto faces = pg.faces();
  for (const auto& f : faces) {
    if (f.size() != 3) throw PreconditionError("trigeodesic_partition needs a triangulation");
  }
  const auto par = bfs_parents(g, root);
  std::vector<int> face_of;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int d : faces[f]) {
      if (static_cast<std::size_t>(d) >= face_of.size()) face_of.resize(static_cast<std::size_t>(d) + 1, -1);
      face_of[static_cast<std::size_t>(d)] = static_cast<int>(f);
    }
  }
  auto corners = [&](int f) {
    std::array<Vertex, 3> c{};
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] = pg.tail(faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(k)]);
    return c;
  };
  auto new_part = [&](std::vector<std::vector<Vertex>> seqs) {
    int id = static_cast<int>(out.parts.size());
    VertexSet members;
    for (const auto& s : seqs) {
      for (Vertex v : s) {
        members.push_back(v);
        out.part_of[static_cast<std::size_t>(v)] = id;
      }
    }
    out.parts.push_back(normalized(std::move(members)));
    out.geodesics.push_back(std::move(seqs));
  };

  int outer = -1;
  for (std::size_t f = 0; f < faces.size() && outer < 0; ++f) {
    for (Vertex c : corners(static_cast<int>(f))) {
      if (c == root) outer = static_cast<int>(f);
    }
  }
  {
    auto c = corners(outer);
    std::vector<Vertex> others;
    for (Vertex v : c) {
      if (v != root) others.push_back(v);
    }
    new_part({{root, others[0]}, {others[1]}});
  }

  std::vector<int> in_region(faces.size(), -1);
  std::vector<std::vector<int>> work;
  {
    std::vector<int> all;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (static_cast<int>(f) != outer) all.push_back(static_cast<int>(f));
    }
    work.push_back(std::move(all));
  }
  std::vector<int> next_dart(static_cast<std::size_t>(n), -1);
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::vector<char> on_boundary(static_cast<std::size_t>(n), 0);
  for (std::size_t wi = 0; wi < work.size(); ++wi) {
    const std::vector<int> region = work[wi];
    const int stamp = static_cast<int>(wi);
    for (int f : region) in_region[static_cast<std::size_t>(f)] = stamp;
    auto inside = [&](int f) { return f >= 0 && in_region[static_cast<std::size_t>(f)] == stamp; };

    std::vector<Vertex> touched;
    int first_dart = -1;
    for (int f : region) {
      for (int d : faces[static_cast<std::size_t>(f)]) {
        touched.push_back(pg.tail(d));
        if (inside(face_of[static_cast<std::size_t>(d ^ 1)])) continue;
        Vertex t = pg.tail(d);
        if (next_dart[static_cast<std::size_t>(t)] >= 0) throw VerificationError("trigeodesic_partition: region boundary is not a simple cycle");
        next_dart[static_cast<std::size_t>(t)] = d;
        if (first_dart < 0) first_dart = d;
      }
    }
    touched = normalized(std::move(touched));
    std::vector<Vertex> cycle;
    for (int d = first_dart;;) {
      cycle.push_back(pg.tail(d));
      d = next_dart[static_cast<std::size_t>(pg.head(d))];
      if (d == first_dart) break;
      if (d < 0 || cycle.size() > touched.size()) throw VerificationError("trigeodesic_partition: region boundary is not a cycle");
    }
    std::size_t boundary_count = 0;
    for (Vertex v : touched) boundary_count += next_dart[static_cast<std::size_t>(v)] >= 0 ? 1 : 0;
    if (boundary_count != cycle.size()) throw VerificationError("trigeodesic_partition: region boundary is not a single cycle");
    for (Vertex v : cycle) on_boundary[static_cast<std::size_t>(v)] = 1;
    auto cleanup = [&] {
      for (Vertex v : touched) {
        next_dart[static_cast<std::size_t>(v)] = -1;
        color[static_cast<std::size_t>(v)] = -1;
        on_boundary[static_cast<std::size_t>(v)] = 0;
      }
    };
    std::vector<Vertex> interior;
    for (Vertex v : touched) {
      if (!on_boundary[static_cast<std::size_t>(v)]) interior.push_back(v);
    }
    if (interior.empty()) {
      cleanup();
      continue;
    }

    const std::size_t len = cycle.size();
    std::vector<int> label(len);
    for (std::size_t k = 0; k < len; ++k) {
      label[k] = out.part_of[static_cast<std::size_t>(cycle[k])];
      if (label[k] < 0) throw VerificationError("trigeodesic_partition: unassigned boundary vertex");
    }
    // Rotate so that a run starts at position 0, then cut into runs.
    std::size_t start = 0;
    for (std::size_t k = 0; k < len; ++k) {
      if (label[k] != label[(k + len - 1) % len]) {
        start = k;
        break;
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end) in rotated positions
    for (std::size_t k = 0; k < len;) {
      std::size_t e = k + 1;
      while (e < len && label[(start + e) % len] == label[(start + k) % len]) ++e;
      runs.emplace_back(k, e);
      k = e;
    }
    if (runs.size() > 3) throw VerificationError("trigeodesic_partition: region bounded by more than three parts");
    while (runs.size() < 3) {
      std::size_t longest = 0;
      for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].second - runs[r].first > runs[longest].second - runs[longest].first) longest = r;
      }
      auto [b, e] = runs[longest];
      std::size_t mid = b + (e - b) / 2;
      if (runs.size() == 1) mid = b + (e - b) / 3;
      runs[longest] = {b, mid};
      runs.insert(runs.begin() + static_cast<std::ptrdiff_t>(longest) + 1, {mid, e});
    }
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t k = runs[r].first; k < runs[r].second; ++k) color[static_cast<std::size_t>(cycle[(start + k) % len])] = static_cast<int>(r);
    }
    for (Vertex v : interior) {
      Vertex u = v;
      while (!on_boundary[static_cast<std::size_t>(u)]) {
        u = par[static_cast<std::size_t>(u)];
        if (u < 0) throw VerificationError("trigeodesic_partition: tree path leaves the region");
      }
      color[static_cast<std::size_t>(v)] = color[static_cast<std::size_t>(u)];
    }

    int tau = -1;
    std::array<Vertex, 3> best{};
    for (int f : region) {
      auto c = corners(f);
      int c0 = color[static_cast<std::size_t>(c[0])];
      int c1 = color[static_cast<std::size_t>(c[1])];
      int c2 = color[static_cast<std::size_t>(c[2])];
      if (c0 == c1 || c1 == c2 || c0 == c2) continue;
      std::sort(c.begin(), c.end());
      if (tau < 0 || c < best) {
        tau = f;
        best = c;
      }
    }
    if (tau < 0) throw VerificationError("trigeodesic_partition: no trichromatic face");

    std::vector<std::pair<Vertex, Vertex>> cut;
    auto add_cut = [&](Vertex u, Vertex v) { cut.emplace_back(std::min(u, v), std::max(u, v)); };
    auto tc = corners(tau);
    for (int k = 0; k < 3; ++k) add_cut(tc[static_cast<std::size_t>(k)], tc[static_cast<std::size_t>((k + 1) % 3)]);
    std::vector<std::vector<Vertex>> legs;
    for (Vertex c : best) {
      if (on_boundary[static_cast<std::size_t>(c)]) continue;
      std::vector<Vertex> leg;
      for (Vertex u = c; !on_boundary[static_cast<std::size_t>(u)]; u = par[static_cast<std::size_t>(u)]) {
        leg.push_back(u);
        add_cut(u, par[static_cast<std::size_t>(u)]);
      }
      std::reverse(leg.begin(), leg.end());
      legs.push_back(std::move(leg));
    }
    std::sort(cut.begin(), cut.end());
    if (!legs.empty()) new_part(std::move(legs));

    std::vector<int> comp(faces.size(), -1);
    std::vector<std::vector<int>> children;
    for (int f : region) {
      if (f == tau || comp[static_cast<std::size_t>(f)] >= 0) continue;
      std::vector<int> members{f};
      comp[static_cast<std::size_t>(f)] = static_cast<int>(children.size());
      for (std::size_t qi = 0; qi < members.size(); ++qi) {
        for (int d : faces[static_cast<std::size_t>(members[qi])]) {
          int h = face_of[static_cast<std::size_t>(d ^ 1)];
          if (!inside(h) || h == tau || comp[static_cast<std::size_t>(h)] >= 0) continue;
          Vertex u = pg.tail(d);
          Vertex v = pg.head(d);
          if (std::binary_search(cut.begin(), cut.end(), std::make_pair(std::min(u, v), std::max(u, v)))) continue;
          comp[static_cast<std::size_t>(h)] = static_cast<int>(children.size());
          members.push_back(h);
        }
      }
      std::sort(members.begin(), members.end());
      children.push_back(std::move(members));
    }
    cleanup();
    for (auto& c : children) work.push_back(std::move(c));
  }
  out.quotient = quotient_graph(g, out.part_of, static_cast<int>(out.parts.size()));
  auto problem = trigeodesic_problem(g, out);
  if (!problem.empty()) throw VerificationError("trigeodesic_partition: " + problem);
  return out;
}

}  // namespace fragile
