// dynreach: instance generation, change-script replay and weight construction.
//
// Exit codes: 0 pass, 1 oracle disagreement or failed verification, 2 usage or
// parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "dynreach/generators.hpp"
#include "dynreach/io.hpp"
#include "dynreach/oracle.hpp"
#include "dynreach/replay.hpp"
#include "dynreach/weights.hpp"

namespace {

using namespace dynreach;

constexpr int kPass = 0;
constexpr int kDisagree = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

template <class Write>
void write_output(const std::string& path, Write&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  write(out);
}

struct GenerateArgs {
  std::string kind = "random-gnp";
  std::size_t n = 16;
  double p = 0.2;
  std::size_t q = 3;
  std::size_t length = 4;
  std::size_t k = 2;
  std::size_t max_degree = 0;
  bool undirected = false;
  std::uint64_t seed = 1;
  std::string out;
  std::string decomposition_out;
  std::string script_out;
  std::size_t steps = 0;
  std::size_t batch = 4;
  double delete_probability = 0.0;
};

int run_generate(const GenerateArgs& a) {
  const Directedness kind = a.undirected ? Directedness::kUndirected : Directedness::kDirected;
  Graph g;
  std::optional<TreeDecomposition> t;
  if (a.kind == "random-gnp") {
    g = random_gnp(a.n, a.p, a.seed, kind);
  } else if (a.kind == "path-union") {
    g = path_union(a.q, a.length, a.seed);
  } else if (a.kind == "partial-k-tree") {
    PartialKTreeOptions options;
    options.edge_probability = a.p;
    options.max_degree = a.max_degree;
    options.kind = kind;
    GeneratedInstance instance = partial_k_tree(a.n, a.k, a.seed, options);
    g = std::move(instance.graph);
    t = std::move(instance.decomposition);
  } else {
    throw UsageError("unknown generator kind " + a.kind);
  }
  write_output(a.out, [&](std::ostream& out) { write_graph(out, g); });
  if (t && !a.decomposition_out.empty()) {
    write_output(a.decomposition_out, [&](std::ostream& out) { write_decomposition(out, *t); });
  }
  if (a.steps > 0) {
    if (a.script_out.empty()) throw UsageError("--steps needs --script-out");
    ScriptOptions options{a.steps, a.batch, a.delete_probability};
    const auto script = random_change_script(g, a.seed, options);
    write_output(a.script_out, [&](std::ostream& out) { write_change_script(out, script); });
  }
  return kPass;
}

struct EngineArgs {
  std::string engine = "tc-insert";
  bool oracle_check = false;
  std::optional<double> budget_c;
  std::uint64_t seed = 1;
  std::string mode = "verified";
  std::string scheme = "random";
  bool no_timing = false;
};

ReplayOptions replay_options(const EngineArgs& a) {
  ReplayOptions options;
  const auto engine = parse_engine_kind(a.engine);
  if (!engine) throw UsageError("unknown engine " + a.engine);
  options.engine = *engine;
  options.oracle_check = a.oracle_check;
  options.budget_c = a.budget_c;
  options.seed = a.seed;
  options.timing = !a.no_timing;
  options.algebraic.seed = a.seed;
  options.algebraic.mode = a.mode == "faithful" ? AlgebraicMode::kFaithful : AlgebraicMode::kVerified;
  if (a.scheme == "paper") {
    throw UsageError("replay builds weights without a decomposition; use --weight-scheme random");
  }
  options.algebraic.scheme = WeightScheme::kRandom;
  return options;
}

void add_engine_flags(CLI::App* cmd, EngineArgs& a) {
  cmd->add_option("--engine", a.engine, "tc-insert | undirected | algebraic")
      ->check(CLI::IsMember({"tc-insert", "undirected", "algebraic"}));
  cmd->add_flag("--oracle-check", a.oracle_check, "Cross-check every step against the brute-force oracle");
  cmd->add_option("--budget-c", a.budget_c, "Flag steps larger than ceil(log2(n)^c)");
  cmd->add_option("--seed", a.seed, "Seed for weights and sampled queries");
  cmd->add_option("--mode", a.mode, "Algebraic engine mode")->check(CLI::IsMember({"faithful", "verified"}));
  cmd->add_option("--weight-scheme", a.scheme, "Algebraic weight scheme")->check(CLI::IsMember({"paper", "random"}));
  cmd->add_flag("--no-timing", a.no_timing, "Omit elapsed times so reports are byte-reproducible");
}

int run_replay(const std::string& graph_path, const std::string& script_path, const std::string& out_path,
               const EngineArgs& a) {
  const ReplayOptions options = replay_options(a);
  auto graph_in = open_input(graph_path);
  const Graph g = read_graph(graph_in);
  std::vector<BulkChange> script;
  if (!script_path.empty()) {
    auto script_in = open_input(script_path);
    script = read_change_script(script_in);
  }
  const ReplayReport report = replay(g, script, options);
  write_output(out_path, [&](std::ostream& out) { write_report(out, report); });
  return report.pass() ? kPass : kDisagree;
}

struct BenchArgs {
  std::string kind = "random-gnp";
  std::size_t n = 32;
  double p = 0.05;
  std::size_t steps = 10;
  std::size_t batch = 0;  // 0: the log^2 n budget
  double delete_probability = 0.0;
};

int run_bench(const BenchArgs& b, const EngineArgs& a) {
  ReplayOptions options = replay_options(a);
  const bool undirected = options.engine == EngineKind::kUndirected;
  const Directedness kind = undirected ? Directedness::kUndirected : Directedness::kDirected;
  Graph g;
  if (b.kind == "random-gnp") {
    g = random_gnp(b.n, b.p, a.seed, kind);
  } else if (b.kind == "partial-k-tree") {
    PartialKTreeOptions pk;
    pk.kind = kind;
    g = partial_k_tree(b.n, 2, a.seed, pk).graph;
  } else {
    throw UsageError("bench supports random-gnp and partial-k-tree");
  }
  ScriptOptions so;
  so.steps = b.steps;
  so.max_batch = b.batch != 0 ? b.batch : std::max<std::size_t>(1, change_budget(b.n, 2.0));
  so.delete_probability = options.engine == EngineKind::kTcInsert ? 0.0 : b.delete_probability;
  const auto script = random_change_script(g, a.seed + 1, so);
  const ReplayReport report = replay(g, script, options);
  write_report(std::cout, report);
  return report.pass() ? kPass : kDisagree;
}

struct WeightsArgs {
  std::string graph;
  std::string decomposition;
  std::string construction = "treewidth";
  std::size_t max_degree = 0;
  bool shift = false;
  std::string out;
};

int run_weights(const WeightsArgs& a) {
  auto graph_in = open_input(a.graph);
  const Graph g = read_graph(graph_in);
  auto td_in = open_input(a.decomposition);
  const TreeDecomposition t = read_decomposition(td_in);

  WeightAssignment w;
  if (a.construction == "bounded-degree") {
    const TreeDecomposition binary = binarize_decomposition(t);
    const DecompositionReport shape = validate_tree_decomposition(g, binary);
    const std::size_t degree = a.max_degree != 0 ? a.max_degree : std::max<std::size_t>(1, g.max_degree());
    w = btw_bounded_degree_weights(g, binary, degree, static_cast<std::size_t>(std::max(0, shape.width)));
  } else {
    w = btw_weights(g, t);
  }
  const bool small = g.node_count() <= oracle::kMaxEnumerationNodes;
  bool ok = true;
  std::ostringstream verdict;
  if (small) {
    const auto circulation = oracle::circulation_report(g, w);
    ok = circulation.has_nonzero_circulation;
    verdict << "# circulation cycles=" << circulation.cycles.size()
            << " nonzero=" << (circulation.has_nonzero_circulation ? "yes" : "no")
            << " dominance=" << (circulation.dominance_holds ? "yes" : "no") << '\n';
  } else {
    verdict << "# circulation unchecked (n above oracle limit)\n";
  }
  verdict << "# certification=" << to_string(w.certification) << " bound_exponent="
          << (w.bound_exponent ? std::to_string(*w.bound_exponent) : "?") << '\n';
  if (a.shift) {
    w = shift_to_isolating(g, w, *w.bound_exponent);
    if (small) {
      const bool isolating = oracle::isolation_report(g, w).is_isolating;
      ok = ok && isolating;
      verdict << "# isolation " << (isolating ? "yes" : "no") << '\n';
    }
  }
  write_output(a.out, [&](std::ostream& out) {
    out << verdict.str();
    write_weights(out, w, !a.shift);
  });
  return ok ? kPass : kDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic reachability engines with brute-force cross-checking"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("--kind", gen.kind, "random-gnp | path-union | partial-k-tree")
      ->check(CLI::IsMember({"random-gnp", "path-union", "partial-k-tree"}));
  generate->add_option("-n,--nodes", gen.n, "Node count");
  generate->add_option("-p,--probability", gen.p, "Edge probability");
  generate->add_option("-q,--paths", gen.q, "Path count (path-union)");
  generate->add_option("--length", gen.length, "Nodes per path (path-union)");
  generate->add_option("-k,--width", gen.k, "Treewidth bound (partial-k-tree)");
  generate->add_option("--max-degree", gen.max_degree, "Degree cap (partial-k-tree, 0 = none)");
  generate->add_flag("--undirected", gen.undirected, "Undirected graph");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("-o,--out", gen.out, "Graph file (default stdout)");
  generate->add_option("--decomposition-out", gen.decomposition_out, "Tree decomposition file");
  generate->add_option("--script-out", gen.script_out, "Change script file");
  generate->add_option("--steps", gen.steps, "Change steps to generate");
  generate->add_option("--batch", gen.batch, "Largest batch size");
  generate->add_option("--delete-probability", gen.delete_probability, "Chance an edit deletes");

  EngineArgs replay_engine;
  std::string graph_path;
  std::string script_path;
  std::string report_path;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a change script on an engine");
  replay_cmd->add_option("--graph", graph_path, "Initial graph file")->required();
  replay_cmd->add_option("--script", script_path, "Change script file");
  replay_cmd->add_option("-o,--out", report_path, "Report file (default stdout)");
  add_engine_flags(replay_cmd, replay_engine);

  WeightsArgs weights_args;
  auto* weights_cmd = app.add_subcommand("weights", "Build non-zero circulation weights and verify them");
  weights_cmd->add_option("--graph", weights_args.graph, "Graph file")->required();
  weights_cmd->add_option("--decomposition", weights_args.decomposition, "Tree decomposition file")->required();
  weights_cmd->add_option("--construction", weights_args.construction, "treewidth | bounded-degree")
      ->check(CLI::IsMember({"treewidth", "bounded-degree"}));
  weights_cmd->add_option("--max-degree", weights_args.max_degree, "Degree bound (bounded-degree)");
  weights_cmd->add_flag("--shift", weights_args.shift, "Shift to positive isolating weights");
  weights_cmd->add_option("-o,--out", weights_args.out, "Weight file (default stdout)");

  EngineArgs bench_engine;
  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time an engine on a generated instance and script");
  bench->add_option("--kind", bench_args.kind, "random-gnp | partial-k-tree");
  bench->add_option("-n,--nodes", bench_args.n, "Node count");
  bench->add_option("-p,--probability", bench_args.p, "Edge probability");
  bench->add_option("--steps", bench_args.steps, "Change steps");
  bench->add_option("--batch", bench_args.batch, "Largest batch (0 = ceil(log2(n)^2))");
  bench->add_option("--delete-probability", bench_args.delete_probability, "Chance an edit deletes");
  add_engine_flags(bench, bench_engine);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*replay_cmd) return run_replay(graph_path, script_path, report_path, replay_engine);
    if (*weights_cmd) return run_weights(weights_args);
    if (*bench) return run_bench(bench_args, bench_engine);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDisagree;
  }
  return kUsage;
}
