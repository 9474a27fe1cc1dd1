#include "tdr/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>

#include "tdr/generator.hpp"
#include "tdr/io.hpp"
#include "tdr/preprocess.hpp"

namespace tdr {

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double rel_err(double got, double want) {
  if (got == want) return 0;  // covers both unreachable (inf == inf)
  if (!std::isfinite(got) || !std::isfinite(want)) return kInf;
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

QueryResult run_one(const Hierarchy& h, Algo algo, NodeId s, NodeId t, double tau,
                    PruningMethod pruning, const std::optional<TimeInterval>& window) {
  switch (algo) {
    case Algo::kDijkstra:
      return td_dijkstra_query(h, s, t, tau);
    case Algo::kTch:
      return tch_query(h, s, t, tau);
    case Algo::kPruned:
      return pruned_tch_query(h, s, t, tau, pruning, window);
    case Algo::kAtch:
      return atch_query(h, s, t, tau);
    case Algo::kProfile:
      break;
  }
  // Profile queries: evaluate the s->t profile at the requested departure.
  QueryResult r;
  r.source = s;
  r.target = t;
  r.departure = tau;
  if (auto profile = profile_query(h, s, t)) {
    r.found = true;
    r.travel_time = profile->eval(tau);
    r.arrival = tau + r.travel_time;
  }
  return r;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::kDijkstra: return "dijkstra";
    case Algo::kTch: return "tch";
    case Algo::kPruned: return "pruned";
    case Algo::kAtch: return "atch";
    case Algo::kProfile: return "profile";
  }
  return "?";
}

std::optional<Algo> algo_from_name(const std::string& name) {
  for (Algo a : {Algo::kDijkstra, Algo::kTch, Algo::kPruned, Algo::kAtch, Algo::kProfile})
    if (name == algo_name(a)) return a;
  return std::nullopt;
}

bool algo_matches_mode(Algo a, HierarchyMode mode) {
  switch (a) {
    case Algo::kDijkstra: return true;
    case Algo::kAtch: return mode == HierarchyMode::kApprox;
    default: return mode == HierarchyMode::kExact;
  }
}

VerifyReport verify_run(const TdGraph& graph, const Hierarchy& h, const VerifyOptions& opt) {
  std::vector<Algo> algos = opt.algos;
  if (algos.empty()) {
    algos = h.mode == HierarchyMode::kExact ? std::vector<Algo>{Algo::kTch, Algo::kPruned}
                                            : std::vector<Algo>{Algo::kAtch};
  }
  auto queries = random_queries(graph.node_count(), graph.period(), opt.queries, opt.seed);

  VerifyReport rep;
  rep.ok = true;
  rep.text = fmt("verify nodes=%u edges=%zu hierarchy_edges=%zu queries=%zu seed=%llu\n",
                 graph.node_count(), graph.edge_count(), h.edges.size(), opt.queries,
                 static_cast<unsigned long long>(opt.seed));

  std::vector<QueryResult> oracle;
  oracle.reserve(queries.size());
  for (const auto& q : queries) oracle.push_back(td_dijkstra_query(graph, q.s, q.t, q.tau));

  for (Algo algo : algos) {
    if (!algo_matches_mode(algo, h.mode)) continue;
    double max_err = 0;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto& q = queries[i];
      QueryResult r = run_one(h, algo, q.s, q.t, q.tau, opt.pruning, opt.window);
      double err = rel_err(r.travel_time, oracle[i].travel_time);
      max_err = std::max(max_err, err);
      if (!(err <= opt.tolerance)) ++failures;
    }
    rep.max_rel_err = std::max(rep.max_rel_err, max_err);
    rep.failures += failures;
    rep.text += fmt("algo=%s max_rel_err=%.3e failures=%zu/%zu\n", algo_name(algo), max_err,
                    failures, queries.size());
    if (failures) rep.ok = false;
  }
  rep.text += rep.ok ? "result PASS\n" : "result FAIL\n";
  return rep;
}

BenchReport bench_run(const TdGraph& graph, const Hierarchy& h, const BenchOptions& opt) {
  std::vector<Algo> algos = opt.algos;
  if (algos.empty()) {
    algos = h.mode == HierarchyMode::kExact
                ? std::vector<Algo>{Algo::kDijkstra, Algo::kTch, Algo::kPruned}
                : std::vector<Algo>{Algo::kDijkstra, Algo::kAtch};
  }
  auto queries = random_queries(graph.node_count(), graph.period(), opt.queries, opt.seed);

  BenchReport rep;
  rep.text = fmt("bench nodes=%u edges=%zu queries=%zu seed=%llu\n", graph.node_count(),
                 graph.edge_count(), queries.size(), static_cast<unsigned long long>(opt.seed));

  if (opt.time_preprocessing) {
    auto start = Clock::now();
    ContractionConfig config;
    config.mode = h.mode;
    config.epsilon = h.epsilon;
    Hierarchy rebuilt = build_hierarchy(graph, order_nodes(graph, {}), config);
    rep.text += fmt("preprocess_time_s=%.3f\n", seconds_since(start));
    (void)rebuilt;
  }

  std::size_t shortcuts = 0, shortcut_points = 0;
  for (const auto& he : h.edges) {
    if (!he.is_shortcut()) continue;
    ++shortcuts;
    shortcut_points += he.bounds ? he.bounds->lower.size() + he.bounds->upper.size()
                                 : he.exact().size();
  }
  rep.text += fmt("shortcuts=%zu mean_points_per_shortcut=%.2f\n", shortcuts,
                  shortcuts ? static_cast<double>(shortcut_points) / shortcuts : 0.0);

  double oracle_mean_time = 0;
  for (Algo algo : algos) {
    if (!algo_matches_mode(algo, h.mode)) continue;
    std::vector<double> times;
    times.reserve(queries.size());
    double settled_sum = 0;
    for (const auto& q : queries) {
      auto start = Clock::now();
      QueryResult r = run_one(h, algo, q.s, q.t, q.tau, PruningMethod::kStatic, std::nullopt);
      times.push_back(seconds_since(start));
      settled_sum += static_cast<double>(r.stats.settled);
    }
    double mean = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    if (algo == Algo::kDijkstra) oracle_mean_time = mean;
    double speedup = algo == Algo::kDijkstra || oracle_mean_time == 0 || mean == 0
                         ? 1.0
                         : oracle_mean_time / mean;
    rep.text += fmt("algo=%s mean_time_us=%.1f median_time_us=%.1f mean_settled=%.1f speedup=%.2f\n",
                    algo_name(algo), mean * 1e6, median * 1e6, settled_sum / queries.size(),
                    speedup);
  }
  return rep;
}

std::string run_queries(const Hierarchy& h, const std::vector<io::QuerySpec>& queries, Algo algo,
                        PruningMethod pruning, std::optional<TimeInterval> window) {
  std::string out;
  for (const auto& q : queries) {
    if (algo == Algo::kProfile) {
      out += fmt("%u %u profile", q.s, q.t);
      if (auto profile = profile_query(h, q.s, q.t)) {
        out += fmt(" %zu", profile->size());
        for (const auto& p : profile->points()) out += fmt(" %.17g %.17g", p.time, p.value);
      } else {
        out += " unreachable";
      }
      out += '\n';
      continue;
    }
    QueryResult r = run_one(h, algo, q.s, q.t, q.tau, pruning, window);
    out += fmt("%u %u %.17g %.17g %.17g %zu\n", q.s, q.t, q.tau, r.arrival, r.travel_time,
               r.stats.settled);
  }
  return out;
}

}  // namespace tdr
