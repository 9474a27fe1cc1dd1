#include "tdr/preprocess.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "helpers.hpp"
#include "tdr/generator.hpp"
#include "tdr/rng.hpp"
#include "tdr/search.hpp"

using namespace tdr;
using test::in_intervals;
using test::random_fifo_ttf;
using test::ttf_close;

namespace {

Ttf c(double v, double period = 1000.0) { return Ttf::constant(v, period); }

TdGraph random_graph(SplitMix64& rng, NodeId n, std::size_t m, double period = 86400.0) {
  std::vector<Edge> edges;
  while (edges.size() < m) {
    auto u = static_cast<NodeId>(rng.below(n));
    auto v = static_cast<NodeId>(rng.below(n));
    if (u != v) edges.push_back({u, v, random_fifo_ttf(rng, period)});
  }
  return TdGraph(n, std::move(edges), period);
}

std::vector<NodeId> identity_order(NodeId n) {
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  return order;
}

using ShortcutKey = std::tuple<NodeId, NodeId, NodeId>;  // tail, head, middle

std::set<ShortcutKey> shortcut_keys(const Hierarchy& h) {
  std::set<ShortcutKey> keys;
  for (const auto& he : h.edges)
    if (he.is_shortcut()) keys.insert({he.tail, he.head, he.middle});
  return keys;
}

}  // namespace

TEST_SUITE_BEGIN("preprocess");

TEST_CASE("ordering handles empty and single-node graphs") {
  CHECK(order_nodes(TdGraph(0, {}, 100.0), {}).empty());
  auto one = order_nodes(TdGraph(1, {}, 100.0), {});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0);
}

TEST_CASE("ordering is a stable golden permutation for a fixed seed") {
  SplitMix64 rng(4242);
  TdGraph g = random_graph(rng, 10, 24, 86400.0);
  auto order1 = order_nodes(g, {});
  auto order2 = order_nodes(g, {});
  CHECK(order1 == order2);  // deterministic across runs
  // Frozen from the first reference run.
  std::vector<NodeId> golden{0, 2, 3, 5, 1, 4, 9, 6, 7, 8};
  CHECK(order1 == golden);

  OrderingStrategy sampled;
  sampled.kind = OrderingStrategy::Kind::kDepartureSamples;
  sampled.samples = 4;
  auto order3 = order_nodes(g, sampled);
  CHECK(order3 == order_nodes(g, sampled));
  CHECK(std::is_permutation(order3.begin(), order3.end(), identity_order(10).begin()));
}

TEST_CASE("contracting the middle of a path inserts the linked shortcut") {
  SplitMix64 rng(51);
  Ttf f1 = random_fifo_ttf(rng, 86400.0);
  Ttf f2 = random_fifo_ttf(rng, 86400.0);
  TdGraph g(3, {{0, 1, f1}, {1, 2, f2}}, 86400.0);
  Contractor con(g, {1, 0, 2}, {});
  auto added = con.contract_next();
  REQUIRE(added.size() == 1);
  const HierarchyEdge& sc = con.edges()[added[0]];
  CHECK(sc.tail == 0);
  CHECK(sc.head == 2);
  CHECK(sc.middle == 1);
  CHECK(ttf_close(sc.exact(), link(f1, f2)));
  // No witness exists, so the shortcut is valid over the whole period.
  REQUIRE(sc.validity.size() == 1);
  CHECK(sc.validity[0].length() == doctest::Approx(86400.0));
}

TEST_CASE("a constantly faster direct edge witnesses the shortcut away") {
  TdGraph g(3, {{0, 1, c(10)}, {1, 2, c(10)}, {0, 2, c(15)}}, 1000.0);
  Contractor con(g, {1, 0, 2}, {});
  CHECK(con.contract_next().empty());
}

TEST_CASE("a direct edge cheaper half the day restricts the validity window") {
  // via 1: constant 20. direct: below 20 only on (250, 750).
  Ttf direct({{0, 30}, {500, 10}}, 1000.0);
  TdGraph g(3, {{0, 1, c(10)}, {1, 2, c(10)}, {0, 2, direct}}, 1000.0);
  Contractor con(g, {1, 0, 2}, {});
  auto added = con.contract_next();
  REQUIRE(added.size() == 1);
  const HierarchyEdge& sc = con.edges()[added[0]];
  for (int i = 0; i < 1000; ++i) {
    double tau = i + 0.5;
    bool shortcut_needed = 20.0 < direct.eval(tau) - 1e-9;
    bool direct_strictly_better = direct.eval(tau) < 20.0 - 1e-9;
    if (shortcut_needed) CHECK(in_intervals(sc.validity, tau, 1000.0));
    if (direct_strictly_better) CHECK_FALSE(in_intervals(sc.validity, tau, 1000.0));
  }
}

TEST_CASE("approximate contraction with epsilon zero matches exact contraction") {
  SplitMix64 rng(52);
  for (int round = 0; round < 5; ++round) {
    TdGraph g = random_graph(rng, 12, 30);
    auto order = order_nodes(g, {});
    Hierarchy exact = build_hierarchy(g, order, {});
    ContractionConfig approx0;
    approx0.mode = HierarchyMode::kApprox;
    approx0.epsilon = 0.0;
    Hierarchy atch = build_hierarchy(g, order, approx0);
    CHECK(shortcut_keys(exact) == shortcut_keys(atch));
  }
}

TEST_CASE("constant-profile graphs contract identically in both modes") {
  SplitMix64 rng(53);
  std::vector<Edge> edges;
  for (int i = 0; i < 30; ++i) {
    auto u = static_cast<NodeId>(rng.below(10));
    auto v = static_cast<NodeId>(rng.below(10));
    if (u != v) edges.push_back({u, v, c(rng.uniform(10.0, 100.0))});
  }
  TdGraph g(10, std::move(edges), 1000.0);
  auto order = order_nodes(g, {});
  ContractionConfig approx;
  approx.mode = HierarchyMode::kApprox;
  approx.epsilon = 0.7;
  CHECK(shortcut_keys(build_hierarchy(g, order, {})) ==
        shortcut_keys(build_hierarchy(g, order, approx)));
}

TEST_CASE("approximate contraction never drops an exact shortcut") {
  SplitMix64 rng(54);
  for (int round = 0; round < 5; ++round) {
    TdGraph g = random_graph(rng, 14, 40);
    auto order = order_nodes(g, {});
    auto exact_keys = shortcut_keys(build_hierarchy(g, order, {}));
    ContractionConfig approx;
    approx.mode = HierarchyMode::kApprox;
    approx.epsilon = 0.1;
    auto approx_keys = shortcut_keys(build_hierarchy(g, order, approx));
    CHECK(std::includes(approx_keys.begin(), approx_keys.end(), exact_keys.begin(),
                        exact_keys.end()));
  }
}

TEST_CASE("atch shortcut bounds contain the exact unpacked function") {
  SplitMix64 rng(55);
  TdGraph g = random_graph(rng, 14, 40);
  ContractionConfig approx;
  approx.mode = HierarchyMode::kApprox;
  approx.epsilon = 0.25;
  Hierarchy atch = build_hierarchy(g, order_nodes(g, {}), approx);
  for (EdgeId e = 0; e < atch.edges.size(); ++e) {
    const auto& he = atch.edges[e];
    if (!he.is_shortcut()) continue;
    REQUIRE(he.bounds.has_value());
    auto chain = unpack_edge(atch, e);
    for (int i = 0; i < 100; ++i) {
      double tau = rng.uniform(0.0, 86400.0);
      double t = tau;
      for (EdgeId orig : chain) t += atch.edges[orig].exact().eval(t);
      double exact = t - tau;
      CHECK(he.bounds->lower.eval(tau) <= exact + 1e-6);
      CHECK(he.bounds->upper.eval(tau) >= exact - 1e-6);
    }
  }
}

TEST_CASE("two-node graphs contract to their input edges") {
  TdGraph g(2, {{0, 1, c(4)}, {1, 0, c(6)}}, 1000.0);
  Hierarchy h = build_hierarchy(g, {0, 1}, {});
  CHECK(h.edges.size() == 2);
  CHECK(shortcut_keys(h).empty());
}

TEST_CASE("overlay profile distances survive every contraction step") {
  // On micro instances, compare profile distances in the shrinking overlay
  // against the input graph for every pair of surviving nodes.
  SplitMix64 rng(56);
  for (int round = 0; round < 8; ++round) {
    const NodeId n = static_cast<NodeId>(rng.range(3, 6));
    TdGraph g = random_graph(rng, n, 2 * n, 10000.0);
    auto order = order_nodes(g, {});
    Contractor con(g, order, {});
    std::vector<char> gone(n, 0);
    while (!con.done()) {
      gone[con.next_node()] = 1;
      con.contract_next();
      for (NodeId u = 0; u < n; ++u) {
        if (gone[u]) continue;
        auto overlay = profile_dijkstra(con.overlay_view(), u, 10000.0);
        auto base = profile_dijkstra(BaseView(g), u, 10000.0);
        for (NodeId w = 0; w < n; ++w) {
          if (gone[w] || w == u) continue;
          REQUIRE(base.label[w].has_value() == overlay.label[w].has_value());
          if (!base.label[w]) continue;
          for (int i = 0; i < 40; ++i) {
            double tau = rng.uniform(0.0, 10000.0);
            CHECK(overlay.label[w]->eval(tau) ==
                  doctest::Approx(base.label[w]->eval(tau)).epsilon(1e-6));
          }
        }
      }
    }
  }
}

TEST_CASE("condensing an epsilon-zero atch reproduces the exact hierarchy") {
  SplitMix64 rng(57);
  TdGraph g = random_graph(rng, 12, 30);
  auto order = order_nodes(g, {});
  Hierarchy exact = build_hierarchy(g, order, {});
  ContractionConfig approx0;
  approx0.mode = HierarchyMode::kApprox;
  approx0.epsilon = 0.0;
  Hierarchy condensed = condense(build_hierarchy(g, order, approx0));
  CHECK(condensed.mode == HierarchyMode::kExact);
  REQUIRE(condensed.edges.size() == exact.edges.size());
  CHECK(shortcut_keys(condensed) == shortcut_keys(exact));
  SplitMix64 sample(99);
  for (EdgeId e = 0; e < condensed.edges.size(); ++e) {
    if (!condensed.edges[e].is_shortcut() || condensed.eligible_parts(e).size() <= 1) {
      // Unique constituents: condensing reproduces the stored function.
      CHECK(ttf_close(condensed.edges[e].exact(), exact.edges[e].exact(), 1e-6));
    } else {
      // Parallel constituents: condensing stores their envelope, which can
      // only undercut the single pair the exact build linked.
      for (int i = 0; i < 50; ++i) {
        double tau = sample.uniform(0.0, 86400.0);
        CHECK(condensed.edges[e].exact().eval(tau) <=
              exact.edges[e].exact().eval(tau) + 1e-6);
      }
    }
  }
}

TEST_CASE("condensing recomputes one-level shortcuts as the constituent link") {
  SplitMix64 rng(58);
  Ttf f1 = random_fifo_ttf(rng, 86400.0);
  Ttf f2 = random_fifo_ttf(rng, 86400.0);
  TdGraph g(3, {{0, 1, f1}, {1, 2, f2}}, 86400.0);
  ContractionConfig approx;
  approx.mode = HierarchyMode::kApprox;
  approx.epsilon = 0.5;
  Hierarchy condensed = condense(build_hierarchy(g, {1, 0, 2}, approx));
  EdgeId sc = kNoEdge;
  for (EdgeId e = 0; e < condensed.edges.size(); ++e)
    if (condensed.edges[e].is_shortcut()) sc = e;
  REQUIRE(sc != kNoEdge);
  CHECK(ttf_close(condensed.edges[sc].exact(), link(f1, f2), 1e-9));
}

TEST_SUITE_END();
