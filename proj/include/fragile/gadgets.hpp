#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fragile/error.hpp"
#include "fragile/graph.hpp"
#include "fragile/io.hpp"
#include "fragile/parameters.hpp"
#include "fragile/rational.hpp"

namespace fragile {

/// Weighted gadget. level[x] = i when x is the handle of a copy of T_i(H).
struct GadgetGraph {
  Graph graph;
  Vertex handle = 0;
  std::vector<int> level;
  WeightFunction weights;
  std::string name;

  /// x together with everything reachable from it through vertices of
  /// strictly smaller level.
  VertexSet jug(Vertex x) const {
    VertexSet out{x};
    std::vector<Vertex> stack{x};
    std::vector<char> seen(static_cast<std::size_t>(graph.order()), 0);
    seen[static_cast<std::size_t>(x)] = 1;
    const int top = level[static_cast<std::size_t>(x)];
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : graph.neighbors(v)) {
        if (seen[static_cast<std::size_t>(w)] || level[static_cast<std::size_t>(w)] >= top) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        out.push_back(w);
        stack.push_back(w);
      }
    }
    return normalized(std::move(out));
  }
};

inline constexpr long kDefaultGadgetCap = 50000;

/// |V(T_d(H))| = 1 + |V(H)| * |V(T_{d-1}(H))|.
inline BigInt td_gadget_order(long h, int d) {
  BigInt n = 1;
  for (int i = 0; i < d; ++i) n = 1 + h * n;
  return n;
}

/// Inner graph H with weights w.
struct InnerGraph {
  Graph graph;
  WeightFunction weights;
  std::string name;
};

inline InnerGraph inner_two_k1() { return {Graph(2), {Rational(1), Rational(1)}, "2K1"}; }

inline InnerGraph inner_path(int n) {
  require(n >= 1, "inner path needs at least one vertex");
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return {g, WeightFunction(static_cast<std::size_t>(n), Rational(1)), "P" + std::to_string(n)};
}

GadgetGraph build_binary_tree(int d);

/// T_d(H) numbered handle first, then the copy of H, then the jugs of the
/// H-vertices in order, recursively.
inline GadgetGraph build_td_gadget(const InnerGraph& inner, int d, long cap = kDefaultGadgetCap) {
  require(d >= 0, "build_td_gadget needs d >= 0");
  const long h = inner.graph.order();
  require(h >= 1, "build_td_gadget needs a non-empty inner graph");
  Rational total = total_weight(inner.weights);
  require(static_cast<long>(inner.weights.size()) == h && total > 0, "build_td_gadget needs a non-zero weight per inner vertex");
  BigInt order = td_gadget_order(h, d);
  if (order > cap) {
    throw PreconditionError("T_" + std::to_string(d) + "(" + inner.name + ") has " + order.get_str() + " vertices, above the cap " + std::to_string(cap));
  }
  const int n = static_cast<int>(order.get_si());
  GadgetGraph out;
  out.name = "T_" + std::to_string(d) + "(" + inner.name + ")";
  out.graph = Graph(n);
  out.level.assign(static_cast<std::size_t>(n), 0);
  out.weights.assign(static_cast<std::size_t>(n), Rational(0));
  out.handle = 0;
  out.level[0] = d;
  out.weights[0] = 1;
  Vertex next = 1;
  auto build = [&](auto&& self, Vertex handle, int i) -> void {
    if (i == 0) return;
    const Vertex base = next;
    next += static_cast<Vertex>(h);
    for (Vertex y = 0; y < h; ++y) {
      Vertex x = base + y;
      out.level[static_cast<std::size_t>(x)] = i - 1;
      out.weights[static_cast<std::size_t>(x)] = out.weights[static_cast<std::size_t>(handle)] * inner.weights[static_cast<std::size_t>(y)] / total;
      out.graph.add_edge(handle, x);
    }
    for (auto [u, v] : inner.graph.edges()) out.graph.add_edge(base + u, base + v);
    for (Vertex y = 0; y < h; ++y) self(self, base + y, i - 1);
  };
  build(build, 0, d);
  return out;
}

/// Complete binary tree of depth d in heap order with t_d weights.
inline GadgetGraph build_binary_tree(int d) {
  if (d < 0 || d > 20) throw PreconditionError("build_binary_tree needs 0 <= d <= 20");
  const int n = (1 << (d + 1)) - 1;
  GadgetGraph out;
  out.name = "B_" + std::to_string(d);
  out.graph = Graph(n);
  out.level.assign(static_cast<std::size_t>(n), 0);
  out.weights.assign(static_cast<std::size_t>(n), Rational(0));
  for (Vertex v = 0; v < n; ++v) {
    int depth = 0;
    while ((2 << depth) - 1 <= v) ++depth;
    out.level[static_cast<std::size_t>(v)] = d - depth;
    out.weights[static_cast<std::size_t>(v)] = Rational(1, 1);
    mpz_mul_2exp(out.weights[static_cast<std::size_t>(v)].get_den_mpz_t(), out.weights[static_cast<std::size_t>(v)].get_den_mpz_t(), static_cast<mp_bitcnt_t>(depth));
    if (v > 0) out.graph.add_edge((v - 1) / 2, v);
  }
  return out;
}

inline InnerGraph inner_binary_tree(int d) {
  auto b = build_binary_tree(d);
  return {b.graph, b.weights, b.name};
}

/// Complete rooted (arity)-ary tree of depth d with weight arity^-depth.
inline GadgetGraph build_weighted_tree(int arity, int d, long cap = kDefaultGadgetCap) {
  require(arity >= 2 && d >= 0, "build_weighted_tree needs arity >= 2, d >= 0");
  BigInt order = 0;
  for (int i = 0; i <= d; ++i) order += pow_big(arity, static_cast<unsigned long>(i));
  if (order > cap) throw PreconditionError("complete " + std::to_string(arity) + "-ary tree of depth " + std::to_string(d) + " has " + order.get_str() + " vertices, above the cap " + std::to_string(cap));
  const int n = static_cast<int>(order.get_si());
  GadgetGraph out;
  out.name = "tree(" + std::to_string(arity) + "," + std::to_string(d) + ")";
  out.graph = Graph(n);
  out.level.assign(static_cast<std::size_t>(n), 0);
  out.weights.assign(static_cast<std::size_t>(n), Rational(0));
  out.weights[0] = 1;
  out.level[0] = d;
  for (Vertex v = 1; v < n; ++v) {
    Vertex p = (v - 1) / arity;
    out.graph.add_edge(p, v);
    out.level[static_cast<std::size_t>(v)] = out.level[static_cast<std::size_t>(p)] - 1;
    out.weights[static_cast<std::size_t>(v)] = out.weights[static_cast<std::size_t>(p)] / arity;
  }
  return out;
}

/// AHU canonical string of the tree component containing root.
inline std::string rooted_tree_canonical(const Graph& g, Vertex root) {
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  auto rec = [&](auto&& self, Vertex v, Vertex parent) -> std::string {
    if (seen[static_cast<std::size_t>(v)]) throw PreconditionError("rooted_tree_canonical: component has a cycle");
    seen[static_cast<std::size_t>(v)] = 1;
    std::vector<std::string> kids;
    for (Vertex w : g.neighbors(v)) {
      if (w != parent) kids.push_back(self(self, w, v));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  return rec(rec, root, -1);
}

enum class LbParam { Star, Td };

struct LbResult {
  int value = 0;
  VertexSet x;
  Rational budget;
  long nodes = 0;
};

namespace detail {

class LbSearch {
 public:
  LbSearch(const Graph& g, const WeightFunction& w, LbParam param, Rational budget, long node_limit)
      : g_(g), w_(w), param_(param), budget_(std::move(budget)), node_limit_(node_limit) {
    for (Vertex v = 0; v < g.order(); ++v) order_.push_back(v);
    std::stable_sort(order_.begin(), order_.end(), [&](Vertex a, Vertex b) { return w_[static_cast<std::size_t>(a)] > w_[static_cast<std::size_t>(b)]; });
  }

  LbResult run() {
    best_ = value(full_mask());
    best_x_ = 0;
    search(0, 0, Rational(0), full_mask());
    LbResult r;
    r.value = best_;
    for (Vertex v = 0; v < g_.order(); ++v) {
      if (best_x_ >> v & 1) r.x.push_back(v);
    }
    r.budget = budget_;
    r.nodes = nodes_;
    return r;
  }

 private:
  using Mask = std::uint64_t;

  Mask full_mask() const { return g_.order() == 64 ? ~Mask{0} : (Mask{1} << g_.order()) - 1; }

  // f(G[keep]); hereditary, so values only drop when vertices are removed.
  int value(Mask keep) {
    auto it = memo_.find(keep);
    if (it != memo_.end()) return it->second;
    VertexSet s;
    for (Vertex v = 0; v < g_.order(); ++v) {
      if (keep >> v & 1) s.push_back(v);
    }
    auto sub = induced_subgraph(g_, s);
    int f = 0;
    if (param_ == LbParam::Star) {
      f = star(sub.graph);
    } else {
      try {
        f = exact_treedepth(sub.graph, 64).value;
      } catch (const PreconditionError& e) {
        throw SearchLimitError(std::string("lb_certify: ") + e.what());
      }
    }
    memo_.emplace(keep, f);
    return f;
  }

  // Vertices order_[i..] undecided; x = chosen set; keep = complement of x.
  void search(std::size_t i, Mask x, const Rational& used, Mask keep) {
    if (++nodes_ > node_limit_) throw SearchLimitError("lb_certify: search node limit exceeded");
    Mask undecided_fit = 0;
    for (std::size_t k = i; k < order_.size(); ++k) {
      Vertex v = order_[k];
      if (used + w_[static_cast<std::size_t>(v)] <= budget_) undecided_fit |= Mask{1} << v;
    }
    if (value(keep & ~undecided_fit) >= best_) return;
    if (i == order_.size() || undecided_fit == 0) {
      if (!maximal(x, used)) return;
      int f = value(keep);
      if (f < best_) {
        best_ = f;
        best_x_ = x;
      }
      return;
    }
    Vertex v = order_[i];
    Rational with = used + w_[static_cast<std::size_t>(v)];
    if (with <= budget_) search(i + 1, x | Mask{1} << v, with, keep & ~(Mask{1} << v));
    search(i + 1, x, used, keep);
  }

  bool maximal(Mask x, const Rational& used) const {
    for (Vertex v = 0; v < g_.order(); ++v) {
      if (!(x >> v & 1) && used + w_[static_cast<std::size_t>(v)] <= budget_) return false;
    }
    return true;
  }

  const Graph& g_;
  const WeightFunction& w_;
  LbParam param_;
  Rational budget_;
  long node_limit_;
  long nodes_ = 0;
  std::vector<Vertex> order_;
  std::unordered_map<Mask, int> memo_;
  int best_ = 0;
  Mask best_x_ = 0;
};

}  // namespace detail

/// min f(G - X) over X with w(X) <= w(V)/a. Up to `search_cap` vertices the
/// search is unrestricted; above it the search may visit at most
/// 2^search_cap nodes. At most 64 vertices.
inline LbResult lb_certify(const Graph& g, const WeightFunction& w, LbParam param, int a, int search_cap = 22) {
  require(a >= 1, "lb_certify needs a >= 1");
  require(static_cast<int>(w.size()) == g.order(), "lb_certify: weight count mismatch");
  if (g.order() > 64) throw SearchLimitError("lb_certify: " + std::to_string(g.order()) + " vertices exceed the 64-vertex search limit");
  long limit = g.order() <= search_cap ? (1L << 62) : (1L << std::min(search_cap, 62));
  Rational budget = total_weight(w) / a;
  return detail::LbSearch(g, w, param, budget, limit).run();
}

inline LbResult lb_certify(const GadgetGraph& gg, LbParam param, int a, int search_cap = 22) { return lb_certify(gg.graph, gg.weights, param, a, search_cap); }

struct LbExperimentRow {
  std::string family;
  std::string instance;
  int d = 0;
  int n = 0;
  int a = 0;
  Rational budget;
  bool certified = false;
  int min_value = 0;
  VertexSet witness;
  std::string claim;
  std::string note;
};

/// Builds the weighted instance of a lower-bound family and certifies it;
/// instances out of reach are reported in generation-only mode.
inline LbExperimentRow lb_experiment(const std::string& family, int d, int a, int delta = 3, int search_cap = 22, GadgetGraph* instance = nullptr) {
  require(a >= 1 && d >= 0, "lb_experiment needs a >= 1 and d >= 0");
  LbExperimentRow row;
  row.family = family;
  row.d = d;
  row.a = a;
  GadgetGraph gg;
  LbParam param = LbParam::Td;
  if (family == "ternary") {
    require(delta >= 3, "ternary family needs delta >= 3");
    gg = build_weighted_tree(delta - 1, d);
    param = LbParam::Star;
    row.claim = "r(a) >= (delta-1)^(a-3) = " + (a >= 3 ? pow_big(delta - 1, static_cast<unsigned long>(a - 3)).get_str() : std::string("n/a"));
  } else if (family == "TdTd") {
    gg = build_td_gadget(inner_binary_tree(d), d);
    row.claim = "r(a) = Omega(a^2)";
  } else if (family == "TdPd") {
    gg = build_td_gadget(inner_path(std::max(d, 1)), d);
    row.claim = "r(a) = Omega(a log a)";
  } else {
    throw PreconditionError("unknown family '" + family + "' (expected ternary, TdTd or TdPd)");
  }
  row.instance = gg.name;
  row.n = gg.graph.order();
  row.budget = total_weight(gg.weights) / a;
  try {
    auto r = lb_certify(gg, param, a, search_cap);
    row.certified = true;
    row.min_value = r.value;
    row.witness = r.x;
  } catch (const SearchLimitError& e) {
    row.note = std::string("generation only: ") + e.what();
  }
  if (instance != nullptr) *instance = std::move(gg);
  return row;
}

}  // namespace fragile
