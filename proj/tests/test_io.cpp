#include "tdr/io.hpp"

#include <doctest.h>

#include "helpers.hpp"
#include "tdr/driver.hpp"
#include "tdr/generator.hpp"
#include "tdr/preprocess.hpp"
#include "tdr/query.hpp"
#include "tdr/rng.hpp"

using namespace tdr;
using test::random_fifo_ttf;
using test::ttf_close;

TEST_SUITE_BEGIN("io");

TEST_CASE("graph files round-trip byte for byte") {
  // The derived two-node example plus a generated instance.
  TdGraph tiny(2, {{0, 1, Ttf({{0, 10}, {43200, 20}}, 86400.0)}}, 86400.0);
  std::string text = io::write_graph(tiny);
  TdGraph parsed = io::read_graph(text);
  CHECK(parsed.node_count() == 2);
  CHECK(parsed.edge_count() == 1);
  CHECK(io::write_graph(parsed) == text);

  GeneratorSpec spec;
  spec.model = GeneratorSpec::Model::kRandom;
  spec.nodes = 40;
  spec.seed = 5;
  TdGraph g = generate(spec);
  std::string big = io::write_graph(g);
  CHECK(io::write_graph(io::read_graph(big)) == big);
}

TEST_CASE("graph parser reports line numbers") {
  try {
    io::read_graph("tdg 1\n2 1 100\n0 1 2 0 5\n");  // truncated point list
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(io::read_graph("bogus\n"), io::ParseError);
  CHECK_THROWS_AS(io::read_graph("tdg 1\n1 1 100\n0 0 1 0 5\n"), io::ParseError);  // self loop
}

TEST_CASE("hierarchy files round-trip byte for byte in both modes") {
  SplitMix64 rng(71);
  std::vector<Edge> edges;
  while (edges.size() < 40) {
    auto u = static_cast<NodeId>(rng.below(14));
    auto v = static_cast<NodeId>(rng.below(14));
    if (u != v) edges.push_back({u, v, random_fifo_ttf(rng, 86400.0)});
  }
  TdGraph g(14, std::move(edges), 86400.0);
  auto order = order_nodes(g, {});

  Hierarchy exact = build_hierarchy(g, order, {});
  std::string text = io::write_hierarchy(exact);
  Hierarchy back = io::read_hierarchy(text);
  CHECK(io::write_hierarchy(back) == text);
  CHECK(back.mode == HierarchyMode::kExact);
  CHECK(back.edges.size() == exact.edges.size());

  ContractionConfig config;
  config.mode = HierarchyMode::kApprox;
  config.epsilon = 0.25;
  Hierarchy atch = build_hierarchy(g, order, config);
  std::string atext = io::write_hierarchy(atch);
  Hierarchy aback = io::read_hierarchy(atext);
  CHECK(io::write_hierarchy(aback) == atext);
  CHECK(aback.mode == HierarchyMode::kApprox);
  CHECK(aback.epsilon == doctest::Approx(0.25));

  // A reloaded hierarchy answers queries exactly like the built one.
  for (int q = 0; q < 60; ++q) {
    auto s = static_cast<NodeId>(rng.below(14));
    auto t = static_cast<NodeId>(rng.below(14));
    double tau = rng.uniform(0.0, 86400.0);
    QueryResult want = tch_query(exact, s, t, tau);
    QueryResult got = tch_query(back, s, t, tau);
    REQUIRE(want.found == got.found);
    if (want.found) CHECK(got.travel_time == doctest::Approx(want.travel_time).epsilon(1e-12));
    QueryResult awant = atch_query(atch, s, t, tau);
    QueryResult agot = atch_query(aback, s, t, tau);
    REQUIRE(awant.found == agot.found);
    if (awant.found) CHECK(agot.travel_time == doctest::Approx(awant.travel_time).epsilon(1e-12));
  }
}

TEST_CASE("query files round-trip") {
  std::vector<io::QuerySpec> qs{{0, 5, 100.25}, {3, 3, 0.0}, {7, 1, 86399.5}};
  std::string text = io::write_queries(qs);
  auto back = io::read_queries(text);
  REQUIRE(back.size() == 3);
  CHECK(io::write_queries(back) == text);
  CHECK(back[1].s == 3);
  CHECK(back[2].tau == doctest::Approx(86399.5));
}

TEST_CASE("grid generation matches the advertised shape") {
  GeneratorSpec one;
  one.model = GeneratorSpec::Model::kGrid;
  one.width = 1;
  one.height = 1;
  TdGraph g1 = generate(one);
  CHECK(g1.node_count() == 1);
  CHECK(g1.edge_count() == 0);

  GeneratorSpec four;
  four.model = GeneratorSpec::Model::kGrid;
  four.width = 2;
  four.height = 2;
  TdGraph g4 = generate(four);
  CHECK(g4.node_count() == 4);
  CHECK(g4.edge_count() == 8);  // 4-neighbor, both directions

  GeneratorSpec bad;
  bad.model = GeneratorSpec::Model::kGrid;
  bad.width = 0;
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed and always FIFO") {
  GeneratorSpec spec;
  spec.model = GeneratorSpec::Model::kRandom;
  spec.nodes = 60;
  spec.avg_degree = 3.0;
  spec.seed = 77;
  TdGraph a = generate(spec);
  TdGraph b = generate(spec);
  CHECK(io::write_graph(a) == io::write_graph(b));

  spec.seed = 78;
  CHECK(io::write_graph(generate(spec)) != io::write_graph(a));

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GeneratorSpec s2;
    s2.model = GeneratorSpec::Model::kRandom;
    s2.nodes = 30;
    s2.seed = seed;
    s2.amplitude = 0.8;
    TdGraph g = generate(s2);
    for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(g.edge(e).ttf.is_fifo());
  }
}

TEST_CASE("verify driver passes on a constant grid and trips on corruption") {
  GeneratorSpec spec;
  spec.model = GeneratorSpec::Model::kGrid;
  spec.width = 5;
  spec.height = 4;
  spec.amplitude = 0.0;  // constant profiles
  spec.min_points = 1;
  spec.max_points = 1;
  spec.seed = 9;
  TdGraph g = generate(spec);
  Hierarchy h = build_hierarchy(g, order_nodes(g, {}), {});
  VerifyOptions opt;
  opt.queries = 50;
  opt.seed = 3;
  VerifyReport rep = verify_run(g, h, opt);
  CHECK(rep.ok);
  CHECK(rep.failures == 0);
  CHECK(rep.max_rel_err <= 1e-9);
  CHECK(rep.text == verify_run(g, h, opt).text);  // deterministic report

  // Corrupt the hierarchy by halving every original edge weight: almost
  // every query now beats the oracle.
  Hierarchy bad = h;
  for (auto& he : bad.edges) {
    if (!he.is_shortcut()) he.exact_ttf = Ttf::constant(he.exact().eval(0) * 0.5, bad.period);
  }
  bad.finalize();
  VerifyReport brep = verify_run(g, bad, opt);
  CHECK_FALSE(brep.ok);
  CHECK(brep.failures > 0);
}

TEST_CASE("batch query output contains one line per query") {
  GeneratorSpec spec;
  spec.model = GeneratorSpec::Model::kGrid;
  spec.width = 3;
  spec.height = 3;
  spec.seed = 12;
  TdGraph g = generate(spec);
  Hierarchy h = build_hierarchy(g, order_nodes(g, {}), {});
  std::vector<io::QuerySpec> qs{{0, 8, 100.0}, {4, 4, 0.0}, {8, 0, 500.0}};
  std::string out = run_queries(h, qs, Algo::kTch);
  CHECK(std::count(out.begin(), out.end(), '\n') == 3);
  // s == t rows report zero travel time.
  auto pos = out.find("4 4 0 0 0");
  CHECK(pos != std::string::npos);
}

TEST_SUITE_END();
