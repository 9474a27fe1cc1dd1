#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdr/graph.hpp"
#include "tdr/io.hpp"
#include "tdr/query.hpp"

namespace tdr {

/// Query algorithms the batch tools can run.
enum class Algo { kDijkstra, kTch, kPruned, kAtch, kProfile };

const char* algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

/// True iff the algorithm can run on a hierarchy of this mode.
bool algo_matches_mode(Algo a, HierarchyMode mode);

struct VerifyOptions {
  std::size_t queries = 100;
  std::uint64_t seed = 1;
  std::vector<Algo> algos;  // empty: every algorithm matching the mode
  PruningMethod pruning = PruningMethod::kStatic;
  std::optional<TimeInterval> window;
  double tolerance = 1e-6;  // relative
};

/// Samples random queries, answers them with each algorithm and compares
/// the travel times against plain time-dependent Dijkstra on the input
/// graph. The report text is deterministic for fixed inputs.
struct VerifyReport {
  std::string text;
  bool ok = false;
  double max_rel_err = 0;
  std::size_t failures = 0;
};

VerifyReport verify_run(const TdGraph& graph, const Hierarchy& h, const VerifyOptions& opt);

struct BenchOptions {
  std::size_t queries = 100;
  std::uint64_t seed = 1;
  std::vector<Algo> algos;
  /// Re-run preprocessing (with the hierarchy's recorded mode and epsilon)
  /// to measure its time; skipped when false.
  bool time_preprocessing = true;
};

struct BenchReport {
  std::string text;
};

BenchReport bench_run(const TdGraph& graph, const Hierarchy& h, const BenchOptions& opt);

/// Answers a batch of queries with one algorithm; result lines are
/// `<s> <t> <tau> <arrival> <travel_time> <settled>` (profile queries list
/// the breakpoints instead).
std::string run_queries(const Hierarchy& h, const std::vector<io::QuerySpec>& queries, Algo algo,
                        PruningMethod pruning = PruningMethod::kStatic,
                        std::optional<TimeInterval> window = std::nullopt);

}  // namespace tdr
