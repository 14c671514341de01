#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fragile/gadgets.hpp"
#include "fragile/io.hpp"
#include "fragile/parameters.hpp"
#include "fragile/pipeline.hpp"
#include "fragile/serialize.hpp"

using namespace fragile;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kClass = 3, kVerify = 4 };

struct Options {
  std::string in;
  std::string out;
  int a = 2;
  std::string param = "tw";
  std::string graph_class = "planar";
  int delta = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int samples = 16;
  int budget_td = 25;
  int search_cap = 22;
  std::size_t support_threshold = 10000;
  std::string family;
  std::string inner = "path";
  std::vector<int> d{2};
  long cap = kDefaultGadgetCap;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed_given) return o.seed;
  if (const char* env = std::getenv("FRAGILE_SEED")) {
    try {
      std::size_t used = 0;
      std::uint64_t s = std::stoull(env, &used);
      if (env[used] == '\0') return s;
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("FRAGILE_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

Graph load_graph(const std::string& path) {
  if (path.empty()) throw PreconditionError("--in is required");
  return parse_graph(read_text(path));
}

void print_verdicts(const audit::AuditResult& r) {
  for (const auto& v : r.verdicts) {
    if (!v.ok) std::cerr << "FAIL " << v.check << (v.detail.empty() ? "" : ": " + v.detail) << '\n';
  }
}

int cmd_decompose(const Options& o) {
  Graph g = load_graph(o.in);
  if (o.out.empty()) throw PreconditionError("--out directory is required");
  DecomposeConfig cfg;
  cfg.graph_class = o.graph_class;
  cfg.param = parse_param(o.param);
  cfg.a = o.a;
  cfg.delta = o.delta;
  cfg.seed = resolve_seed(o);
  cfg.samples = o.samples;
  cfg.support_threshold = o.support_threshold;
  auto out = run_decompose(g, cfg);
  write_decompose(o.out, g, out);
  std::cout << "bound " << out.report["bound_value"].get<std::string>() << " (" << out.report["bound_formula"].get<std::string>() << ")\n";
  std::cout << "eps " << out.distribution["eps"].get<std::string>() << ", outcomes " << out.outcomes.size() << '\n';
  if (!out.verdicts.ok()) {
    print_verdicts(out.verdicts);
    return kVerify;
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.in.empty()) throw PreconditionError("--in must name a decompose output directory");
  auto r = verify_directory(o.in);
  if (!r.ok()) {
    const auto* f = r.first_failure();
    std::cerr << "verification failed: " << f->check << (f->detail.empty() ? "" : ": " + f->detail) << '\n';
    return kVerify;
  }
  std::cout << "ok: " << r.verdicts.size() << " checks passed\n";
  return kOk;
}

int cmd_params(const Options& o) {
  Graph g = load_graph(o.in);
  Json j{{"n", g.order()}, {"m", g.size()}, {"star", star(g)}};
  bool small = true;
  for (const auto& c : components(g)) small = small && static_cast<int>(c.size()) <= o.budget_td;
  if (small) j["td"] = exact_treedepth(g, o.budget_td).value;
  else j["td"] = "exceeds --budget-td";
  if (g.order() <= 10) j["tw"] = exact_treewidth(g);
  else j["tw_upper"] = treewidth_upper(g).value;
  std::cout << dump(j);
  return kOk;
}

GadgetGraph build_gadget(const Options& o) {
  if (o.d.size() != 1) throw PreconditionError("gadget takes a single --d");
  const int d = o.d.front();
  if (o.family == "Bd") return build_binary_tree(d);
  if (o.family == "Td") {
    if (o.inner == "binary") return build_td_gadget(inner_two_k1(), d, o.cap);
    if (o.inner == "path") return build_td_gadget(inner_path(std::max(d, 1)), d, o.cap);
    if (o.inner == "tree") return build_td_gadget(inner_binary_tree(d), d, o.cap);
    throw PreconditionError("--inner must be binary, path or tree");
  }
  if (o.family == "ternary") return build_weighted_tree(std::max(o.delta, 3) - 1, d, o.cap);
  throw PreconditionError("--family must be Bd, Td or ternary");
}

int cmd_gadget(const Options& o) {
  auto gg = build_gadget(o);
  std::string text = "# " + gg.name + "\n" + write_graph(gg.graph, &gg.weights);
  if (o.out.empty()) std::cout << text;
  else write_text(o.out, text);
  std::cerr << gg.name << ": " << gg.graph.order() << " vertices, total weight " << format_rational(total_weight(gg.weights)) << '\n';
  return kOk;
}

int cmd_certify(const Options& o) {
  if (o.family.empty()) throw PreconditionError("--family is required (ternary, TdTd or TdPd)");
  std::cout << "instance\tn\ta\tbudget\tcertified_min\tasymptotic_claim\n";
  for (int d : o.d) {
    GadgetGraph gg;
    auto row = lb_experiment(o.family, d, o.a, std::max(o.delta, 3), o.search_cap, &gg);
    std::cout << row.instance << '\t' << row.n << '\t' << row.a << '\t' << format_rational(row.budget) << '\t'
              << (row.certified ? std::to_string(row.min_value) : "generation-only") << '\t' << (row.certified ? row.claim : "-") << '\n';
    if (!row.certified) std::cerr << row.note << '\n';
    if (!o.out.empty()) {
      auto path = std::filesystem::path(o.out) / (o.family + "_d" + std::to_string(d) + ".txt");
      write_text(path, "# " + row.instance + "\n" + write_graph(gg.graph, &gg.weights));
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional fragility decompositions, verification and lower-bound gadgets"};
  app.require_subcommand(1);
  Options o;
  auto* decompose = app.add_subcommand("decompose", "build and self-check a thin distribution");
  decompose->add_option("--in", o.in, "input graph file");
  decompose->add_option("--out", o.out, "output directory");
  auto* seed_opt = decompose->add_option("--seed", o.seed, "64-bit seed (default FRAGILE_SEED or 0)");
  decompose->add_option("--a", o.a, "rate a >= 1")->check(CLI::PositiveNumber);
  decompose->add_option("--param", o.param, "star | td | tw")->check(CLI::IsMember({"star", "td", "tw"}));
  decompose->add_option("--class", o.graph_class, "tw:k | outerplanar | planar | planar-chordal");
  decompose->add_option("--delta", o.delta, "maximum degree bound for the star pipelines");
  decompose->add_option("--samples", o.samples, "outcomes drawn from sampler distributions")->check(CLI::PositiveNumber);
  decompose->add_option("--support-threshold", o.support_threshold, "largest composed support kept explicit");
  auto* verify = app.add_subcommand("verify", "re-check a decompose output directory");
  verify->add_option("--in", o.in, "directory written by decompose");
  auto* params = app.add_subcommand("params", "star, td and tw of a graph file");
  params->add_option("--in", o.in, "input graph file");
  params->add_option("--budget-td", o.budget_td, "largest component for exact treedepth")->check(CLI::PositiveNumber);
  auto* gadget = app.add_subcommand("gadget", "write a weighted gadget graph");
  gadget->add_option("--family", o.family, "Bd | Td | ternary")->required();
  gadget->add_option("--inner", o.inner, "binary | path | tree (Td only)");
  gadget->add_option("--d", o.d, "depth")->expected(1);
  gadget->add_option("--delta", o.delta, "ternary: tree arity is delta-1");
  gadget->add_option("--cap", o.cap, "vertex cap");
  gadget->add_option("--out", o.out, "output file (default stdout)");
  auto* certify = app.add_subcommand("certify", "certified lower bounds on gadget families");
  certify->add_option("--family", o.family, "ternary | TdTd | TdPd")->required();
  certify->add_option("--d", o.d, "one or more depths")->expected(1, 64);
  certify->add_option("--a", o.a, "rate a >= 1")->check(CLI::PositiveNumber);
  certify->add_option("--delta", o.delta, "ternary: maximum degree");
  certify->add_option("--search-cap", o.search_cap, "exhaustive search cap")->check(CLI::PositiveNumber);
  certify->add_option("--out", o.out, "directory for the instance files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  o.seed_given = seed_opt->count() > 0;
  try {
    if (*decompose) return cmd_decompose(o);
    if (*verify) return cmd_verify(o);
    if (*params) return cmd_params(o);
    if (*gadget) return cmd_gadget(o);
    if (*certify) return cmd_certify(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ClassViolation& e) {
    std::cerr << "class violation: " << e.what() << '\n';
    return kClass;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return kVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
