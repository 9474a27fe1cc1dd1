// tdr: time-dependent routing engine CLI.
//
// Subcommands: gen (synthetic instances), preprocess (build a hierarchy),
// query (batch queries), verify (compare against plain time-dependent
// Dijkstra), bench (timings). Exit codes: 0 ok, 1 verification failure,
// 2 usage or parse error.

#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "tdr/driver.hpp"
#include "tdr/generator.hpp"
#include "tdr/io.hpp"
#include "tdr/preprocess.hpp"
#include "tdr/query.hpp"

namespace {

using namespace tdr;

struct GenArgs {
  std::string model = "grid";
  GeneratorSpec spec;
  std::string output;
};

struct PreprocessArgs {
  std::string input;
  std::string output;
  std::string mode = "exact";
  double epsilon = 0.1;
  std::string strategy = "average";
  std::uint32_t samples = 4;
  std::size_t settle_limit = 50;
  std::uint32_t hop_limit = 16;
  bool do_condense = false;
};

struct QueryArgs {
  std::string hierarchy;
  std::string queries;
  std::string algo = "tch";
  std::string pruning = "static";
  std::vector<double> window;
};

struct BatchArgs {
  std::string graph;
  std::string hierarchy;
  std::size_t queries = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> algos;
  std::string pruning = "static";
  std::vector<double> window;
};

int run_gen(const GenArgs& args) {
  GeneratorSpec spec = args.spec;
  spec.model = args.model == "random" ? GeneratorSpec::Model::kRandom : GeneratorSpec::Model::kGrid;
  TdGraph g = generate(spec);
  io::write_file(args.output, io::write_graph(g));
  std::fprintf(stderr, "wrote %s: %u nodes, %zu edges\n", args.output.c_str(), g.node_count(),
               g.edge_count());
  return 0;
}

int run_preprocess(const PreprocessArgs& args) {
  TdGraph g = io::read_graph(io::read_file(args.input));
  OrderingStrategy strategy;
  if (args.strategy == "samples") {
    strategy.kind = OrderingStrategy::Kind::kDepartureSamples;
    strategy.samples = args.samples;
  }
  ContractionConfig config;
  config.mode = args.mode == "approx" ? HierarchyMode::kApprox : HierarchyMode::kExact;
  config.epsilon = config.mode == HierarchyMode::kApprox ? args.epsilon : 0.0;
  config.witness_settle_limit = args.settle_limit;
  config.witness_hop_limit = args.hop_limit;

  Hierarchy h = build_hierarchy(g, order_nodes(g, strategy), config);
  if (args.do_condense) {
    if (h.mode != HierarchyMode::kApprox) {
      std::fprintf(stderr, "error: --condense needs --mode approx\n");
      return 2;
    }
    h = condense(h);
  }
  io::write_file(args.output, io::write_hierarchy(h));
  std::size_t shortcuts = 0;
  for (const auto& he : h.edges) shortcuts += he.is_shortcut();
  std::fprintf(stderr, "wrote %s: %zu edges (%zu shortcuts)\n", args.output.c_str(),
               h.edges.size(), shortcuts);
  return 0;
}

std::optional<TimeInterval> parse_window(const std::vector<double>& w) {
  if (w.empty()) return std::nullopt;
  return TimeInterval{w[0], w[1]};
}

int run_query(const QueryArgs& args) {
  Hierarchy h = io::read_hierarchy(io::read_file(args.hierarchy));
  auto queries = io::read_queries(io::read_file(args.queries));
  auto algo = algo_from_name(args.algo);
  if (!algo) {
    std::fprintf(stderr, "error: unknown algorithm '%s'\n", args.algo.c_str());
    return 2;
  }
  if (!algo_matches_mode(*algo, h.mode)) {
    std::fprintf(stderr, "error: algorithm '%s' does not match the hierarchy mode\n",
                 args.algo.c_str());
    return 2;
  }
  // "--pruning none" answers pruned queries with the plain algorithm.
  Algo effective = *algo;
  if (effective == Algo::kPruned && args.pruning == "none") effective = Algo::kTch;
  PruningMethod pruning =
      args.pruning == "interval" ? PruningMethod::kInterval : PruningMethod::kStatic;
  std::fputs(run_queries(h, queries, effective, pruning, parse_window(args.window)).c_str(),
             stdout);
  return 0;
}

std::vector<Algo> parse_algos(const std::vector<std::string>& names) {
  std::vector<Algo> algos;
  for (const auto& name : names) {
    auto a = algo_from_name(name);
    if (!a) throw CLI::ValidationError("--algo", "unknown algorithm '" + name + "'");
    algos.push_back(*a);
  }
  return algos;
}

int run_verify(const BatchArgs& args) {
  TdGraph g = io::read_graph(io::read_file(args.graph));
  Hierarchy h = io::read_hierarchy(io::read_file(args.hierarchy));
  VerifyOptions opt;
  opt.queries = args.queries;
  opt.seed = args.seed;
  opt.algos = parse_algos(args.algos);
  opt.pruning = args.pruning == "interval" ? PruningMethod::kInterval : PruningMethod::kStatic;
  opt.window = parse_window(args.window);
  VerifyReport rep = verify_run(g, h, opt);
  std::fputs(rep.text.c_str(), stdout);
  return rep.ok ? 0 : 1;
}

int run_bench(const BatchArgs& args) {
  TdGraph g = io::read_graph(io::read_file(args.graph));
  Hierarchy h = io::read_hierarchy(io::read_file(args.hierarchy));
  BenchOptions opt;
  opt.queries = args.queries;
  opt.seed = args.seed;
  opt.algos = parse_algos(args.algos);
  BenchReport rep = bench_run(g, h, opt);
  std::fputs(rep.text.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-dependent routing engine"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate a synthetic instance");
  cgen->add_option("--model", gen.model)->check(CLI::IsMember({"grid", "random"}));
  cgen->add_option("--width", gen.spec.width);
  cgen->add_option("--height", gen.spec.height);
  cgen->add_option("--nodes", gen.spec.nodes);
  cgen->add_option("--degree", gen.spec.avg_degree);
  cgen->add_option("--min-points", gen.spec.min_points);
  cgen->add_option("--max-points", gen.spec.max_points);
  cgen->add_option("--min-weight", gen.spec.min_weight);
  cgen->add_option("--max-weight", gen.spec.max_weight);
  cgen->add_option("--amplitude", gen.spec.amplitude);
  cgen->add_option("--period", gen.spec.period);
  cgen->add_option("--seed", gen.spec.seed);
  cgen->add_option("-o,--output", gen.output)->required();

  PreprocessArgs pre;
  CLI::App* cpre = app.add_subcommand("preprocess", "build a hierarchy from a graph file");
  cpre->add_option("-i,--input", pre.input)->required();
  cpre->add_option("-o,--output", pre.output)->required();
  cpre->add_option("--mode", pre.mode)->check(CLI::IsMember({"exact", "approx"}));
  cpre->add_option("--epsilon", pre.epsilon);
  cpre->add_option("--strategy", pre.strategy)->check(CLI::IsMember({"average", "samples"}));
  cpre->add_option("--samples", pre.samples);
  cpre->add_option("--settle-limit", pre.settle_limit);
  cpre->add_option("--hop-limit", pre.hop_limit);
  cpre->add_flag("--condense", pre.do_condense, "condense an approximate hierarchy to exact");

  QueryArgs query;
  CLI::App* cquery = app.add_subcommand("query", "answer a batch of queries");
  cquery->add_option("-H,--hierarchy", query.hierarchy)->required();
  cquery->add_option("-i,--queries", query.queries)->required();
  cquery->add_option("--algo", query.algo);
  cquery->add_option("--pruning", query.pruning)
      ->check(CLI::IsMember({"none", "static", "interval"}));
  cquery->add_option("--window", query.window)->expected(2);

  BatchArgs verify;
  CLI::App* cverify = app.add_subcommand("verify", "compare algorithms against the oracle");
  cverify->add_option("-g,--graph", verify.graph)->required();
  cverify->add_option("-H,--hierarchy", verify.hierarchy)->required();
  cverify->add_option("-n,--queries", verify.queries);
  cverify->add_option("--seed", verify.seed);
  cverify->add_option("--algo", verify.algos);
  cverify->add_option("--pruning", verify.pruning)->check(CLI::IsMember({"static", "interval"}));
  cverify->add_option("--window", verify.window)->expected(2);

  BatchArgs bench;
  CLI::App* cbench = app.add_subcommand("bench", "time algorithms and report speedups");
  cbench->add_option("-g,--graph", bench.graph)->required();
  cbench->add_option("-H,--hierarchy", bench.hierarchy)->required();
  cbench->add_option("-n,--queries", bench.queries);
  cbench->add_option("--seed", bench.seed);
  cbench->add_option("--algo", bench.algos);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cgen->parsed()) return run_gen(gen);
    if (cpre->parsed()) return run_preprocess(pre);
    if (cquery->parsed()) return run_query(query);
    if (cverify->parsed()) return run_verify(verify);
    if (cbench->parsed()) return run_bench(bench);
  } catch (const io::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
