#include "tdr/search.hpp"

#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "tdr/rng.hpp"

using namespace tdr;
using test::random_fifo_ttf;
using test::ttf_close;

namespace {

Ttf c(double v, double period = 100.0) { return Ttf::constant(v, period); }

TdGraph random_graph(SplitMix64& rng, NodeId n, std::size_t m, double period = 86400.0) {
  std::vector<Edge> edges;
  while (edges.size() < m) {
    auto u = static_cast<NodeId>(rng.below(n));
    auto v = static_cast<NodeId>(rng.below(n));
    if (u != v) edges.push_back({u, v, random_fifo_ttf(rng, period)});
  }
  return TdGraph(n, std::move(edges), period);
}

// Exhaustive minimum over all simple paths, evaluated by chaining.
double best_simple_path(const TdGraph& g, NodeId s, NodeId t, double tau) {
  if (s == t) return 0.0;
  std::vector<char> used(g.node_count(), 0);
  double best = kInf;
  auto dfs = [&](auto&& self, NodeId u, double arr) -> void {
    if (u == t) {
      best = std::min(best, arr - tau);
      return;
    }
    used[u] = 1;
    for (EdgeId e : g.out_edges(u)) {
      NodeId h = g.edge(e).head;
      if (used[h]) continue;
      self(self, h, arr + g.edge(e).ttf.eval(arr));
    }
    used[u] = 0;
  };
  dfs(dfs, s, tau);
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("search");

TEST_CASE("scalar search on a single edge and on parallel edges") {
  TdGraph g1(2, {{0, 1, c(5)}}, 100.0);
  auto lab = td_dijkstra(BaseView(g1), 0, 0.0, {.target = 1});
  CHECK(lab.arrival[1] == doctest::Approx(5.0));

  TdGraph g2(2, {{0, 1, c(5)}, {0, 1, c(3)}}, 100.0);
  auto lab2 = td_dijkstra(BaseView(g2), 0, 0.0, {.target = 1});
  CHECK(lab2.arrival[1] == doctest::Approx(3.0));
}

TEST_CASE("unreachable targets stay at infinity") {
  TdGraph g(3, {{0, 1, c(5)}}, 100.0);
  auto lab = td_dijkstra(BaseView(g), 0, 0.0, {.target = 2});
  CHECK(lab.arrival[2] == kInf);
  CHECK_FALSE(lab.reached(2));
}

TEST_CASE("scalar search equals exhaustive path enumeration") {
  SplitMix64 rng(31);
  for (int round = 0; round < 10; ++round) {
    TdGraph g = random_graph(rng, 8, 18);
    for (int q = 0; q < 10; ++q) {
      auto s = static_cast<NodeId>(rng.below(8));
      auto t = static_cast<NodeId>(rng.below(8));
      double tau = rng.uniform(0.0, 86400.0);
      auto lab = td_dijkstra(BaseView(g), s, tau, {.target = t});
      double want = best_simple_path(g, s, t, tau);
      if (want == kInf) {
        CHECK_FALSE(lab.reached(t));
      } else {
        CHECK(lab.travel(t) == doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("settled labels are final (label-setting under FIFO)") {
  SplitMix64 rng(32);
  TdGraph g = random_graph(rng, 20, 60);
  auto lab = td_dijkstra(BaseView(g), 0, 1000.0);
  for (NodeId u = 0; u < 20; ++u) {
    if (!lab.settled[u]) continue;
    for (EdgeId e : g.out_edges(u)) {
      NodeId h = g.edge(e).head;
      if (!lab.settled[h]) continue;
      CHECK(lab.arrival[u] + g.edge(e).ttf.eval(lab.arrival[u]) >= lab.arrival[h] - 1e-9);
    }
  }
}

TEST_CASE("profile of a chain of constants") {
  TdGraph g(3, {{0, 1, c(2)}, {1, 2, c(3)}}, 100.0);
  auto lab = profile_dijkstra(BaseView(g), 0, 100.0);
  REQUIRE(lab.label[2].has_value());
  CHECK(lab.label[2]->is_constant());
  CHECK(lab.label[2]->eval(0.0) == doctest::Approx(5.0));
}

TEST_CASE("profile labels agree with scalar searches everywhere") {
  SplitMix64 rng(33);
  for (int round = 0; round < 5; ++round) {
    TdGraph g = random_graph(rng, 12, 30);
    auto prof = profile_dijkstra(BaseView(g), 0, 86400.0);
    for (int q = 0; q < 20; ++q) {
      auto v = static_cast<NodeId>(rng.below(12));
      double tau = rng.uniform(0.0, 86400.0);
      auto lab = td_dijkstra(BaseView(g), 0, tau, {.target = v});
      if (!prof.label[v]) {
        CHECK_FALSE(lab.reached(v));
        continue;
      }
      CHECK(prof.label[v]->eval(tau) == doctest::Approx(lab.travel(v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("profile of a diamond is the envelope of the two branch chains") {
  // Two 2-edge branches, each cheaper during a different half of the day.
  const double period = 1000.0;
  Ttf a1({{0, 100}, {500, 300}}, period);
  Ttf a2 = Ttf::constant(50.0, period);
  Ttf b1({{0, 300}, {500, 100}}, period);
  Ttf b2 = Ttf::constant(60.0, period);
  TdGraph g(4, {{0, 1, a1}, {1, 3, a2}, {0, 2, b1}, {2, 3, b2}}, period);
  auto prof = profile_dijkstra(BaseView(g), 0, period);
  REQUIRE(prof.label[3].has_value());
  Ttf want = minimum(link(a1, a2), link(b1, b2));
  CHECK(ttf_close(*prof.label[3], want, 1e-9));
}

TEST_CASE("interval search over the full period collapses to static minima") {
  SplitMix64 rng(34);
  TdGraph g = random_graph(rng, 15, 40);
  auto ivl = interval_dijkstra(BaseView(g), 0, {0.0, 86400.0}, 86400.0);
  auto stat = static_dijkstra(BaseView(g), 0, StaticWeight::kMin);
  for (NodeId v = 0; v < 15; ++v) CHECK(ivl.low[v] == stat.dist[v]);
}

TEST_CASE("interval label of a single constant edge is that constant") {
  TdGraph g(2, {{0, 1, c(7)}}, 100.0);
  for (auto w : {TimeInterval{0, 10}, TimeInterval{40, 90}, TimeInterval{0, 100}}) {
    auto ivl = interval_dijkstra(BaseView(g), 0, w, 100.0);
    CHECK(ivl.low[1] == doctest::Approx(7.0));
  }
}

TEST_CASE("interval labels lower-bound scalar travel times inside the window") {
  SplitMix64 rng(35);
  for (int round = 0; round < 5; ++round) {
    TdGraph g = random_graph(rng, 12, 36);
    double b = rng.uniform(0.0, 86400.0);
    TimeInterval w{b, b + rng.uniform(0.0, 20000.0)};
    auto ivl = interval_dijkstra(BaseView(g), 0, w, 86400.0);
    auto stat = static_dijkstra(BaseView(g), 0, StaticWeight::kMin);
    for (int q = 0; q < 100; ++q) {
      auto v = static_cast<NodeId>(rng.below(12));
      double tau = rng.uniform(w.begin, w.end);
      auto lab = td_dijkstra(BaseView(g), 0, tau, {.target = v});
      if (!lab.reached(v)) continue;
      // static-min <= interval label <= scalar travel for any departure in W
      CHECK(stat.dist[v] <= ivl.low[v] + 1e-9);
      CHECK(ivl.low[v] <= lab.travel(v) + 1e-9);
    }
  }
}

TEST_CASE("static searches bound the time-dependent ones") {
  TdGraph g(3, {{0, 1, c(4)}, {1, 2, c(6)}}, 100.0);
  auto mn = static_dijkstra(BaseView(g), 0, StaticWeight::kMin);
  auto mx = static_dijkstra(BaseView(g), 0, StaticWeight::kMax);
  auto lab = td_dijkstra(BaseView(g), 0, 0.0);
  CHECK(mn.dist[2] == doctest::Approx(10.0));
  CHECK(mx.dist[2] == doctest::Approx(10.0));
  CHECK(lab.travel(2) == doctest::Approx(10.0));

  SplitMix64 rng(36);
  for (int round = 0; round < 5; ++round) {
    TdGraph rg = random_graph(rng, 15, 45);
    auto lo = static_dijkstra(BaseView(rg), 0, StaticWeight::kMin);
    auto hi = static_dijkstra(BaseView(rg), 0, StaticWeight::kMax);
    for (int q = 0; q < 20; ++q) {
      double tau = rng.uniform(0.0, 86400.0);
      auto td = td_dijkstra(BaseView(rg), 0, tau);
      for (NodeId v = 0; v < 15; ++v) {
        if (!td.reached(v)) continue;
        CHECK(lo.dist[v] <= td.travel(v) + 1e-9);
        CHECK(td.travel(v) <= hi.dist[v] + 1e-9);
      }
    }
  }

  TdGraph disconnected(3, {{0, 1, c(1)}}, 100.0);
  auto d = static_dijkstra(BaseView(disconnected), 0, StaticWeight::kMin);
  CHECK(d.dist[2] == kInf);
}

TEST_CASE("profile search respects settle limits and reports truncation") {
  SplitMix64 rng(37);
  TdGraph g = random_graph(rng, 30, 90);
  ProfileOptions opt;
  opt.settle_limit = 3;
  auto lab = profile_dijkstra(BaseView(g), 0, 86400.0, opt);
  CHECK(lab.truncated);
  CHECK(lab.settled_count <= 3);
}

TEST_SUITE_END();
