#pragma once

#include <optional>
#include <vector>

#include "tdr/graph.hpp"
#include "tdr/search.hpp"

namespace tdr {

/// How the backward pass labels the nodes that can reach the target in the
/// downward graph.
enum class BackwardMethod {
  kReachabilityOnly,  // lower bounds identically zero
  kStaticMin,         // static search over minimum edge weights
  kInterval           // interval search over an arrival window
};

/// Backward search space of a query: the nodes that can reach the target in
/// the downward graph, the marked down-edges the forward search may use, and
/// a per-node lower bound on the remaining travel time (zero where unknown).
struct BackwardSpace {
  std::vector<char> reached;
  std::vector<EdgeId> marked;
  std::vector<double> lower_bound;
  std::size_t reached_count = 0;
};

/// Explores everything that can reach `t` over down-edges and marks those
/// edges. The interval method needs the expected arrival window at `t`.
BackwardSpace backward_mark(const Hierarchy& h, NodeId t, BackwardMethod method,
                            std::optional<TimeInterval> window = std::nullopt);

struct QueryStats {
  std::size_t settled = 0;
  std::size_t relaxed = 0;
  std::size_t marked = 0;
};

struct QueryResult {
  bool found = false;
  NodeId source = kNoNode;
  NodeId target = kNoNode;
  double departure = 0;
  double arrival = kInf;
  double travel_time = kInf;
  PathResult path;
  QueryStats stats;
};

/// Earliest-arrival query on an exact hierarchy: forward time-dependent
/// search from `s` over the upward edges plus the marked down-edges.
QueryResult tch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0);

enum class PruningMethod { kStatic, kInterval };

/// Same result as tch_query but prunes any node whose travel so far plus the
/// backward lower bound exceeds an upper bound U obtained by evaluating the
/// statically optimal path. Never settles more nodes than tch_query.
QueryResult pruned_tch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0,
                             PruningMethod method = PruningMethod::kStatic,
                             std::optional<TimeInterval> window = std::nullopt);

/// Exact earliest-arrival query on an approximate hierarchy: a conservative
/// corridor search over bound pairs keeps every edge that might lie on an
/// optimal path, the corridor is unpacked to original edges, and an exact
/// forward search runs on the unpacked subgraph.
QueryResult atch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0);

/// Exact travel-time profile s -> t over all departure times.
std::optional<Ttf> profile_query(const TdGraph& graph, NodeId s, NodeId t);
std::optional<Ttf> profile_query(const Hierarchy& h, NodeId s, NodeId t);

/// Expands a connected chain of hierarchy edges into original edges with
/// per-edge departure times, descending into each shortcut's constituents at
/// the actual passage time.
PathResult unpack_path(const Hierarchy& h, const std::vector<EdgeId>& chain, double tau0);

/// Plain time-dependent Dijkstra on the input graph, with path; the oracle
/// the hierarchy queries are verified against.
QueryResult td_dijkstra_query(const TdGraph& graph, NodeId s, NodeId t, double tau0);

/// Same search over a hierarchy's original edges only (no shortcuts); used
/// when only a hierarchy file is at hand.
QueryResult td_dijkstra_query(const Hierarchy& h, NodeId s, NodeId t, double tau0);

}  // namespace tdr
