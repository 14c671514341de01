#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fragile/graph.hpp"
#include "fragile/rational.hpp"

namespace fragile {

/// Non-negative exact weight per vertex.
using WeightFunction = std::vector<Rational>;

inline Rational total_weight(const WeightFunction& w) {
  Rational s = 0;
  for (const auto& x : w) s += x;
  return s;
}

inline Rational weight_of(const WeightFunction& w, const VertexSet& x) {
  Rational s = 0;
  for (Vertex v : x) s += w[static_cast<std::size_t>(v)];
  return s;
}

struct GraphFile {
  Graph graph;
  std::optional<WeightFunction> weights;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline long parse_long(const std::string& tok, int line_no) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" + tok + "'");
  }
  return v;
}

}  // namespace detail

/// Parses the edge-list format with optional rotation system and weights.
///
///   n m [embedded]
///   u v            (m lines)
///   v: w1 ... wk   (n lines, only when embedded)
///   w v p/q        (optional weight lines)
///
/// '#' starts a comment. The rotation system is checked to be a permutation
/// of each neighbourhood here; face/Euler validation lives in plane.hpp.
inline GraphFile parse_graph_file(std::string_view text) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
      auto toks = detail::tokenize(line);
      if (!toks.empty()) lines.emplace_back(no, std::move(toks));
    }
  }
  if (lines.empty()) throw ParseError("empty graph file");
  std::size_t cur = 0;
  const auto& head = lines[cur++];
  if (head.second.size() < 2 || head.second.size() > 3) throw ParseError("line " + std::to_string(head.first) + ": header must be 'n m [embedded]'");
  long n = detail::parse_long(head.second[0], head.first);
  long m = detail::parse_long(head.second[1], head.first);
  bool embedded = false;
  if (head.second.size() == 3) {
    if (head.second[2] != "embedded") throw ParseError("line " + std::to_string(head.first) + ": unknown header flag '" + head.second[2] + "'");
    embedded = true;
  }
  if (n < 0 || m < 0) throw ParseError("negative counts in header");
  GraphFile out{Graph(static_cast<int>(n)), std::nullopt};
  auto vertex = [&](const std::string& tok, int no) {
    long v = detail::parse_long(tok, no);
    if (v < 0 || v >= n) throw ParseError("line " + std::to_string(no) + ": vertex id " + tok + " out of range");
    return static_cast<Vertex>(v);
  };
  for (long i = 0; i < m; ++i) {
    if (cur >= lines.size()) throw ParseError("expected " + std::to_string(m) + " edge lines, found " + std::to_string(i));
    const auto& [no, toks] = lines[cur++];
    if (toks.size() != 2) throw ParseError("line " + std::to_string(no) + ": malformed edge line");
    Vertex u = vertex(toks[0], no);
    Vertex v = vertex(toks[1], no);
    if (u == v) throw ParseError("line " + std::to_string(no) + ": loop at vertex " + std::to_string(u));
    if (!out.graph.try_add_edge(u, v)) throw ParseError("line " + std::to_string(no) + ": duplicate edge " + toks[0] + " " + toks[1]);
  }
  if (embedded) {
    Graph::Rotation rot(static_cast<std::size_t>(n));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (long i = 0; i < n; ++i) {
      if (cur >= lines.size()) throw ParseError("invalid rotation system: expected " + std::to_string(n) + " rotation lines");
      const auto& [no, toks] = lines[cur++];
      std::string first = toks[0];
      if (first.empty() || first.back() != ':') throw ParseError("line " + std::to_string(no) + ": rotation line must start with 'v:'");
      first.pop_back();
      Vertex v = vertex(first, no);
      if (seen[static_cast<std::size_t>(v)]) throw ParseError("line " + std::to_string(no) + ": invalid rotation system: vertex " + first + " listed twice");
      seen[static_cast<std::size_t>(v)] = 1;
      std::vector<Vertex> order;
      for (std::size_t j = 1; j < toks.size(); ++j) order.push_back(vertex(toks[j], no));
      if (normalized(order) != out.graph.neighbors(v) || order.size() != out.graph.neighbors(v).size()) {
        throw ParseError("line " + std::to_string(no) + ": invalid rotation system at vertex " + first);
      }
      rot[static_cast<std::size_t>(v)] = std::move(order);
    }
    out.graph.set_rotation(std::move(rot));
  }
  if (cur < lines.size()) {
    WeightFunction w(static_cast<std::size_t>(n), Rational(0));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (; cur < lines.size(); ++cur) {
      const auto& [no, toks] = lines[cur];
      if (toks.size() != 3 || toks[0] != "w") throw ParseError("line " + std::to_string(no) + ": unexpected trailing content");
      Vertex v = vertex(toks[1], no);
      if (seen[static_cast<std::size_t>(v)]) throw ParseError("line " + std::to_string(no) + ": weight given twice");
      seen[static_cast<std::size_t>(v)] = 1;
      Rational r = parse_rational(toks[2]);
      if (r < 0) throw ParseError("line " + std::to_string(no) + ": negative weight");
      w[static_cast<std::size_t>(v)] = r;
    }
    out.weights = std::move(w);
  }
  return out;
}

inline Graph parse_graph(std::string_view text) { return parse_graph_file(text).graph; }

inline std::string write_graph(const Graph& g, const WeightFunction* weights = nullptr) {
  std::ostringstream out;
  out << g.order() << ' ' << g.size();
  if (g.embedded()) out << " embedded";
  out << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (g.embedded()) {
    for (Vertex v = 0; v < g.order(); ++v) {
      out << v << ':';
      for (Vertex w : (*g.rotation())[static_cast<std::size_t>(v)]) out << ' ' << w;
      out << '\n';
    }
  }
  if (weights != nullptr) {
    for (Vertex v = 0; v < g.order(); ++v) out << "w " << v << ' ' << format_rational((*weights)[static_cast<std::size_t>(v)]) << '\n';
  }
  return out.str();
}

}  // namespace fragile
