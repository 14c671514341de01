// Runs the nine acceptance criteria and prints one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fragile/gadgets.hpp"
#include "fragile/generators.hpp"
#include "fragile/layering.hpp"
#include "fragile/pipeline.hpp"
#include "fragile/td_frag.hpp"
#include "fragile/thin_dist.hpp"
#include "fragile/tree_partition.hpp"
#include "fragile/trigeodesic.hpp"
#include "oracles.hpp"

using namespace fragile;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << what;
    ok = ok && cond;
  }
};

std::vector<Graph> planar_corpus() {
  std::vector<Graph> out;
  for (int s = 2; s <= 8; ++s) out.push_back(gen::grid(s, s));
  out.push_back(gen::grid(3, 8));
  out.push_back(gen::octahedron());
  out.push_back(gen::fan(12));
  out.push_back(gen::k4_embedded());
  std::mt19937_64 rng(1);
  for (int n : {10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60}) out.push_back(gen::random_triangulation(rng, n, 2 * n));
  return out;
}

long log2_up(long a) {
  long k = 0;
  while ((1L << k) < a) ++k;
  return k;
}

BigInt ipow(long b, long e) {
  BigInt r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// ---------------------------------------------------------------------------

void ac1(Check& c) {
  auto corpus = planar_corpus();
  for (std::size_t gi = 0; gi < corpus.size() && c.ok; ++gi) {
    const Graph& g = corpus[gi];
    for (int a = 1; a <= 4 && c.ok; ++a) {
      LayeringResult lay;
      try {
        lay = planar_tw_layering(g, a);
      } catch (const Error& e) {
        c.expect(false, "graph " + std::to_string(gi) + " a=" + std::to_string(a) + ": " + e.what());
        break;
      }
      auto rep = verify_thinness(lay.dist, g.order());
      c.expect(rep.within(make_rational(1, a)), "not 1/a-thin");
      c.expect(lay.bound == 3L * a - 3, "bound is not 3a-3");
      for (std::size_t i = 0; i < lay.classes.size(); ++i) {
        auto rest = remove_vertices(g, lay.classes[i]);
        for (const auto& comp : components(rest.graph)) {
          VertexSet global = rest.lift(comp);
          auto sub = induced_subgraph(g, global);
          if (global.size() <= 10) {
            c.expect(oracle::treewidth(sub.graph) <= 3 * a - 3, "component treewidth above 3a-3");
            continue;
          }
          bool found = false;
          for (const auto& cert : lay.certificates[i]) {
            if (cert.vertices != global) continue;
            found = true;
            auto local = localize_decomposition(cert.td, sub);
            c.expect(tree_decomposition_problem(sub.graph, local).empty(), "invalid certificate");
            c.expect(local.width <= 3 * a - 3, "certificate wider than 3a-3");
          }
          c.expect(found, "component without certificate");
        }
      }
    }
  }
  c.note << corpus.size() << " graphs, a in 1..4";
}

void ac2(Check& c) {
  std::mt19937_64 rng(2);
  int runs = 0;
  for (int it = 0; it < 12 && c.ok; ++it) {
    const int n = 50 + static_cast<int>(rng() % 451);
    const bool tree = it % 2 == 0;
    Graph g = tree ? gen::random_tree(rng, n, 4) : gen::random_series_parallel(rng, n, 4);
    const long k = tree ? 2 : 3;
    const int delta = 4;
    auto td = treewidth_upper(g).witness;
    c.expect(td.width < k, "decomposition too wide for the family");
    for (int a = 1; a <= 4 && c.ok; ++a) {
      const int b = choose_b(a, delta);
      auto tp = build_goodtp(g, td, k, delta, a, b);
      c.expect(tree_partition_problem(g, tp).empty(), "invalid rooted tree partition: " + tree_partition_problem(g, tp));
      // order <= base((D-1)^(b-1) + 6^(a/b)) with base = 12k(D-1)^a, compared
      // exactly: either order <= base(D-1)^(b-1), or the excess e has e^b <= base^b 6^a
      BigInt order = depth_a_order(tp, a);
      BigInt base = 12 * k * ipow(delta - 1, a);
      BigInt excess = order - base * ipow(delta - 1, b - 1);
      bool within = excess <= 0;
      if (!within) {
        BigInt lhs = 1;
        BigInt rhs = ipow(6, a);
        for (int i = 0; i < b; ++i) {
          lhs *= excess;
          rhs *= base;
        }
        within = lhs <= rhs;
      }
      c.expect(within, "depth-a order above the bound");
      auto sf = star_fragile_tw(g, k, delta, a, {}, b);
      for (const auto& e : sf.dist.entries()) c.expect(BigInt(star(remove_vertices(g, e.set).graph)) <= sf.bound, "star above bound");
      c.expect(verify_thinness(sf.dist, n).within(make_rational(1, a)), "not 1/a-thin");
      ++runs;
    }
  }
  c.note << runs << " runs on trees and series-parallel graphs, n <= 500";
}

void ac3(Check& c) {
  std::mt19937_64 rng(3);
  std::vector<Graph> corpus{gen::grid(4, 4), gen::grid(6, 6), gen::grid(5, 8), gen::octahedron(), gen::random_triangulation(rng, 30, 40),
                            gen::random_tree(rng, 60, 3)};
  const int samples = 100000;
  for (std::size_t gi = 0; gi < corpus.size() && c.ok; ++gi) {
    const Graph& g = corpus[gi];
    const int delta = std::max(3, g.max_degree());
    for (int a = 1; a <= 3 && c.ok; ++a) {
      auto sp = star_fragile_planar(g, delta, a, 17 + gi);
      Rational cert = make_rational(1, sp.outer_a) + make_rational(1, sp.inner_a);
      c.expect(sp.dist.eps() == cert, "certificate differs from 1/a' + 1/a''");
      c.expect(cert < make_rational(1, a), "certificate not below 1/a");
      std::vector<long> hits(static_cast<std::size_t>(g.order()), 0);
      const int draws = samples;
      for (int i = 0; i < draws; ++i) {
        VertexSet z = sp.dist.sample(static_cast<std::uint64_t>(i), 99);
        for (Vertex v : z) ++hits[static_cast<std::size_t>(v)];
        if (i < 200) c.expect(BigInt(star(remove_vertices(g, z).graph)) <= sp.bound, "sampled outcome above the star bound");
      }
      for (long h : hits) c.expect(Rational(h, draws) <= cert, "empirical marginal above the certificate");
    }
  }
  c.note << corpus.size() << " graphs, a in 1..3, 1e5 draws each";
}

void ac4(Check& c) {
  for (long a = 1; a <= 8; ++a) {
    const long lg = log2_up(a);
    c.expect(td_outerplanar_bound(a) == 2 * a * (1 + lg), "outerplanar formula");
    c.expect(td_planar_chordal_bound(a) == 8 * a * a * (2 + lg), "planar chordal formula");
    c.expect(td_planar_bound(a) == BigInt(384 * a * a * a * (3 + lg)), "planar formula");
    for (int t = 0; t <= 4; ++t) c.expect(td_tw_bound(t, a) == ipow(2, t * (t + 1) / 2 + 1) * ipow(a, t), "treewidth formula");
  }
  std::mt19937_64 rng(4);
  struct Case {
    Graph g;
    std::string cls;
  };
  std::vector<Case> corpus{{gen::fan(14), "outerplanar"},          {gen::cycle(20), "outerplanar"},
                           {gen::path(30), "outerplanar"},         {gen::random_tree(rng, 40, 4), "outerplanar"},
                           {gen::stacked_triangulation(rng, 20), "planar-chordal"},
                           {gen::stacked_triangulation(rng, 40), "planar-chordal"},
                           {gen::grid(5, 5), "planar"},            {gen::random_triangulation(rng, 25, 30), "planar"},
                           {gen::octahedron(), "planar"},          {gen::random_tree(rng, 30, 3), "tw:1"},
                           {gen::random_series_parallel(rng, 30, 4), "tw:2"}, {gen::stacked_triangulation(rng, 25), "tw:3"}};
  int outcomes = 0;
  for (const auto& cs : corpus) {
    for (int a = 1; a <= 4 && c.ok; ++a) {
      DecomposeConfig cfg;
      cfg.graph_class = cs.cls;
      cfg.param = Param::Td;
      cfg.a = a;
      cfg.seed = 40 + a;
      cfg.samples = 12;
      auto out = run_decompose(cs.g, cfg);
      c.expect(out.verdicts.ok(), cs.cls + ": audit failed");
      BigInt bound = parse_bigint(out.report["bound_value"].get<std::string>());
      for (const auto& o : out.outcomes) {
        VertexSet z = o["set"].get<VertexSet>();
        auto rest = remove_vertices(cs.g, z);
        for (const auto& comp : components(rest.graph)) {
          if (comp.size() > 25) continue;
          auto sub = induced_subgraph(rest.graph, comp);
          c.expect(BigInt(exact_treedepth(sub.graph).value) <= bound, "exact treedepth above the bound");
        }
        ++outcomes;
      }
    }
  }
  c.note << outcomes << " outcomes audited";
}

void ac5(Check& c) {
  std::mt19937_64 rng(5);
  int graphs = 0;
  for (int it = 0; it < 12 && c.ok; ++it) {
    const int n = 4 + static_cast<int>(rng() % 77);
    Graph g = gen::random_triangulation(rng, n, 3 * n);
    Vertex root = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(n));
    auto p = trigeodesic_partition(g, root);
    auto problem = trigeodesic_problem(g, p);
    c.expect(problem.empty(), "n=" + std::to_string(n) + ": " + problem);
    auto q = mcs_ordering(p.quotient);
    c.expect(q.chordal && clique_number(p.quotient, q.order) <= 4, "quotient not chordal with clique number <= 4");
    ++graphs;
  }
  c.note << graphs << " triangulations, n <= 80";
}

void ac6(Check& c) {
  for (int d = 0; d <= 6; ++d) {
    for (const auto& inner : {inner_path(2), inner_path(3), inner_two_k1()}) {
      auto g = build_td_gadget(inner, d);
      c.expect(total_weight(g.weights) == d + 1, g.name + " total weight");
    }
    auto b = build_binary_tree(d);
    c.expect(total_weight(b.weights) == d + 1, "B_d total weight");
    auto t = build_td_gadget(inner_two_k1(), d);
    c.expect(rooted_tree_canonical(b.graph, 0) == rooted_tree_canonical(t.graph, t.handle), "B_d differs from T_d(2K1)");
  }
  for (int p = 0; p <= 4; ++p) c.expect(exact_treedepth(build_binary_tree(p).graph, 64).value == p + 1, "td(B_p) != p+1");
  c.note << "d <= 6, inner P2, P3, 2K1";
}

int brute_min(const Graph& g, const WeightFunction& w, LbParam param, int a) {
  Rational budget = total_weight(w) / a;
  const int n = g.order();
  int best = 1 << 20;
  for (oracle::Mask x = 0; x < (oracle::Mask{1} << n); ++x) {
    Rational used = 0;
    for (int v = 0; v < n; ++v) {
      if (x >> v & 1) used += w[static_cast<std::size_t>(v)];
    }
    if (used > budget) continue;
    oracle::Mask keep = ((oracle::Mask{1} << n) - 1) & ~x;
    best = std::min(best, param == LbParam::Star ? oracle::star(g, keep) : oracle::treedepth(oracle::induced(g, keep)));
  }
  return best;
}

void ac7(Check& c) {
  std::mt19937_64 rng(7);
  int compared = 0;
  std::vector<std::pair<Graph, WeightFunction>> instances;
  for (auto gg : {build_td_gadget(inner_path(2), 2), build_td_gadget(inner_path(3), 1), build_binary_tree(2), build_weighted_tree(2, 2),
                  build_td_gadget(inner_two_k1(), 2)}) {
    instances.emplace_back(gg.graph, gg.weights);
  }
  for (int it = 0; it < 60; ++it) {
    int n = 1 + static_cast<int>(rng() % 12);
    Graph g = oracle::random_graph(rng, n, 0.1 + 0.1 * static_cast<double>(rng() % 5));
    WeightFunction w;
    for (int v = 0; v < n; ++v) {
      w.emplace_back(static_cast<long>(1 + rng() % 5), static_cast<long>(1 + rng() % 4));
      w.back().canonicalize();
    }
    instances.emplace_back(g, w);
  }
  for (const auto& [g, w] : instances) {
    for (int a = 1; a <= 4; ++a) {
      for (LbParam p : {LbParam::Star, LbParam::Td}) {
        c.expect(lb_certify(g, w, p, a).value == brute_min(g, w, p, a), "lb_certify differs from enumeration");
        ++compared;
      }
    }
  }
  std::ostringstream mins;
  for (int h : {2, 3}) {
    auto g = build_td_gadget(inner_path(h), 2);
    int at2 = lb_certify(g, LbParam::Td, 2).value;
    int at3 = lb_certify(g, LbParam::Td, 3).value;
    c.expect(at2 <= at3, "minimum grew when the budget grew");
    mins << "; " << g.name << " min " << at2 << " (a=2), " << at3 << " (a=3)";
  }
  c.note << compared << " cross-checks" << mins.str() << "; monotone in the budget w(V)/a";
}

void ac8(Check& c) {
  auto corpus = planar_corpus();
  int runs = 0;
  for (const auto& g : corpus) {
    const int n = g.order();
    for (int a = 1; a <= 4; ++a) {
      auto d = planar_tw_layering(g, a + 1).dist;
      auto k = to_fractional_coloring(d, a, n, 3L * (a + 1) - 3);
      c.expect(k.total() == 1 + make_rational(1, a), "|kappa| != 1 + 1/a");
      for (const auto& x : covering(k, n)) c.expect(x >= 1, "covering below 1");
      auto back = from_fractional_coloring(k, a + 1, n);
      auto rep = verify_thinness(back, n);
      c.expect(rep.within(make_rational(1, a + 1)), "round trip not thin");
      auto direct = from_fractional_coloring(k, a, n);
      c.expect(verify_thinness(direct, n).within(make_rational(1, a)), "from_fractional_coloring not 1/a-thin");
      ++runs;
    }
  }
  c.note << runs << " conversions";
}

void ac9(Check& c) {
  auto corpus = planar_corpus();
  int runs = 0;
  for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
    const Graph& g = corpus[gi];
    for (Param p : {Param::Tw, Param::Td, Param::Star}) {
      if (p == Param::Star && g.order() > 40) continue;
      DecomposeConfig cfg;
      cfg.graph_class = "planar";
      cfg.param = p;
      cfg.a = 2;
      cfg.seed = 1234 + gi;
      cfg.samples = 8;
      auto x = run_decompose(g, cfg);
      auto y = run_decompose(g, cfg);
      bool same = dump(x.distribution) == dump(y.distribution) && dump(x.report) == dump(y.report) && x.outcomes.size() == y.outcomes.size();
      for (std::size_t i = 0; same && i < x.outcomes.size(); ++i) same = dump(x.outcomes[i]) == dump(y.outcomes[i]);
      c.expect(same, "outputs differ between runs");
      ++runs;
    }
  }
  for (int d = 0; d <= 4; ++d) {
    auto g1 = build_td_gadget(inner_path(3), d);
    auto g2 = build_td_gadget(inner_path(3), d);
    c.expect(write_graph(g1.graph, &g1.weights) == write_graph(g2.graph, &g2.weights), "gadget output differs");
  }
  c.note << runs << " pipeline runs repeated";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> all{{"planar tw-fragility", 30, ac1},     {"star-fragility, bounded tw", 60, ac2},
                             {"star-fragility, planar", 120, ac3}, {"td-fragility formulas and witnesses", 300, ac4},
                             {"trigeodesic partitions", 60, ac5},  {"gadget identities", 10, ac6},
                             {"lower-bound certification", 120, ac7}, {"fractional coloring round trip", 60, ac8},
                             {"determinism", 600, ac9}};
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      all[i].run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << " exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > all[i].limit_s) {
      c.ok = false;
      c.note << " (over the " << all[i].limit_s << " s limit)";
    }
    std::printf("AC%zu %s %s [%.2f s] %s\n", i + 1, c.ok ? "PASS" : "FAIL", all[i].name, secs, c.note.str().c_str());
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
