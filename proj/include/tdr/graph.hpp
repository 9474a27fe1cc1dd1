#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tdr/ttf.hpp"

namespace tdr {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Directed edge of the time-dependent input graph.
struct Edge {
  NodeId tail;
  NodeId head;
  Ttf ttf;
};

/// Time-dependent input network: a directed multigraph with one FIFO
/// travel-time function per edge, all sharing one period. Immutable after
/// construction; concurrent read-only use is safe.
class TdGraph {
 public:
  TdGraph(NodeId node_count, std::vector<Edge> edges, double period);

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  double period() const { return period_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(NodeId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(NodeId v) const { return in_[v]; }

 private:
  NodeId node_count_;
  double period_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

/// Ranks induced by a contraction order: rank[order[i]] = i.
std::vector<std::uint32_t> ranks_of(const std::vector<NodeId>& order);

/// Splits the edge ids of a graph by a contraction order: edge (u, v) goes
/// up iff rank[u] < rank[v]. `order` must be a permutation of the nodes.
std::pair<std::vector<EdgeId>, std::vector<EdgeId>> split_by_order(
    const TdGraph& graph, const std::vector<NodeId>& order);

enum class HierarchyMode { kExact, kApprox };

/// Edge of a contraction hierarchy. Original edges carry their exact
/// travel-time function; shortcuts additionally know the contracted middle
/// node and, in approximate mode, a lower/upper bound pair instead of the
/// exact function. `validity` lists the departure intervals during which the
/// shortcut can lie on a shortest path; searches may ignore it.
struct HierarchyEdge {
  NodeId tail;
  NodeId head;
  std::optional<Ttf> exact_ttf;         // absent only on approx-mode shortcuts
  std::optional<BoundPair> bounds;      // set on shortcuts in approx mode
  NodeId middle = kNoNode;              // set iff shortcut
  std::vector<TimeInterval> validity;   // shortcuts only
  EdgeId orig_edge = kNoEdge;           // input-graph edge id if original
  // Constituent hierarchy edges (down part, up part); resolved by finalize().
  EdgeId part1 = kNoEdge;
  EdgeId part2 = kNoEdge;

  bool is_shortcut() const { return middle != kNoNode; }
  const Ttf& exact() const { return *exact_ttf; }
  const Ttf& lower() const { return bounds ? bounds->lower : *exact_ttf; }
  const Ttf& upper() const { return bounds ? bounds->upper : *exact_ttf; }
};

/// Result of contraction: a node order plus all original edges and accepted
/// shortcuts, split into the upward and downward graph by rank. Immutable
/// after finalize(); queries may share one hierarchy concurrently.
class Hierarchy {
 public:
  NodeId node_count = 0;
  double period = 0;
  HierarchyMode mode = HierarchyMode::kExact;
  double epsilon = 0;
  std::vector<std::uint32_t> rank;   // rank[node]; higher = contracted later
  std::vector<HierarchyEdge> edges;  // originals + shortcuts

  /// Builds adjacency, splits edges by rank and resolves every shortcut's
  /// constituent pair. Must be called once after edges are complete.
  void finalize();

  bool goes_up(EdgeId e) const { return rank[edges[e].tail] < rank[edges[e].head]; }

  const std::vector<EdgeId>& up_out(NodeId v) const { return up_out_[v]; }
  const std::vector<EdgeId>& down_out(NodeId v) const { return down_out_[v]; }
  const std::vector<EdgeId>& down_in(NodeId v) const { return down_in_[v]; }
  const std::vector<EdgeId>& all_in(NodeId v) const { return all_in_[v]; }
  std::vector<EdgeId> up_edge_ids() const;
  std::vector<EdgeId> down_edge_ids() const;

  /// All constituent pairs (down part into middle, up part out of middle)
  /// that could realize the given shortcut; used for conservative unpacking.
  std::vector<std::pair<EdgeId, EdgeId>> eligible_parts(EdgeId shortcut) const;

 private:
  std::vector<std::vector<EdgeId>> up_out_;
  std::vector<std::vector<EdgeId>> down_out_;
  std::vector<std::vector<EdgeId>> down_in_;
  std::vector<std::vector<EdgeId>> all_in_;

  void resolve_parts();
};

/// Recursively expands a hierarchy edge into the original edges it stands
/// for, in path order. Expansion follows the resolved constituent pairs and
/// terminates because middle ranks strictly decrease.
std::vector<EdgeId> unpack_edge(const Hierarchy& h, EdgeId e);

/// Travel time of a hierarchy edge at a given departure, evaluated exactly
/// by descending to original edges (works in approximate mode too).
double eval_unpacked(const Hierarchy& h, EdgeId e, double tau);

/// A path in original edges with consistent per-edge departure times.
struct PathResult {
  std::vector<EdgeId> edges;       // original-edge ids
  std::vector<double> departures;  // departure time per edge
  double travel_time = 0;

  bool empty() const { return edges.empty(); }
};

// --- Graph views -----------------------------------------------------------
//
// The searches are templates over a light view concept:
//   NodeId node_count() const;
//   template <class F> void for_each_out(NodeId u, F&& f) const;
// where f is called as f(head, const Ttf& lower, const Ttf& upper, ref).
// Exact weights are views with lower == upper.

/// The plain input graph.
class BaseView {
 public:
  explicit BaseView(const TdGraph& g) : g_(&g) {}
  NodeId node_count() const { return g_->node_count(); }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : g_->out_edges(u)) {
      const Edge& ed = g_->edge(e);
      f(ed.head, ed.ttf, ed.ttf, e);
    }
  }

 private:
  const TdGraph* g_;
};

/// Upward edges plus, when a reached set is given, downward edges whose head
/// can reach the target. This is the forward search space of a hierarchy
/// query; with `reached == nullptr` it degenerates to the upward graph.
class UpMarkedView {
 public:
  UpMarkedView(const Hierarchy& h, const std::vector<char>* reached)
      : h_(&h), reached_(reached) {}
  NodeId node_count() const { return h_->node_count; }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : h_->up_out(u)) {
      const HierarchyEdge& he = h_->edges[e];
      f(he.head, he.lower(), he.upper(), e);
    }
    if (reached_) {
      for (EdgeId e : h_->down_out(u)) {
        const HierarchyEdge& he = h_->edges[e];
        if ((*reached_)[he.head]) f(he.head, he.lower(), he.upper(), e);
      }
    }
  }

 private:
  const Hierarchy* h_;
  const std::vector<char>* reached_;
};

/// Downward edges traversed against their direction: arcs lead from a node
/// to the tails of its incoming down-edges. Used by backward searches from
/// the target.
class ReverseDownView {
 public:
  explicit ReverseDownView(const Hierarchy& h) : h_(&h) {}
  NodeId node_count() const { return h_->node_count; }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : h_->down_in(u)) {
      const HierarchyEdge& he = h_->edges[e];
      f(he.tail, he.lower(), he.upper(), e);
    }
  }

 private:
  const Hierarchy* h_;
};

/// Every hierarchy edge traversed against its direction. Backward bound
/// computations use this: a node's remaining travel toward the target may
/// climb before it descends, so only a bound over all edges is a valid
/// lower bound for pruning.
class ReverseAllView {
 public:
  explicit ReverseAllView(const Hierarchy& h) : h_(&h) {}
  NodeId node_count() const { return h_->node_count; }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : h_->all_in(u)) {
      const HierarchyEdge& he = h_->edges[e];
      f(he.tail, he.lower(), he.upper(), e);
    }
  }

 private:
  const Hierarchy* h_;
};

/// Downward edges in their own direction (descent towards lower ranks).
class DownView {
 public:
  explicit DownView(const Hierarchy& h) : h_(&h) {}
  NodeId node_count() const { return h_->node_count; }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : h_->down_out(u)) {
      const HierarchyEdge& he = h_->edges[e];
      f(he.head, he.lower(), he.upper(), e);
    }
  }

 private:
  const Hierarchy* h_;
};

/// A subset of a hierarchy's original edges, indexed as its own adjacency.
/// Used for the exact search over an unpacked corridor.
class SubgraphView {
 public:
  SubgraphView(const Hierarchy& h, const std::vector<EdgeId>& edge_ids) : h_(&h) {
    out_.resize(h.node_count);
    for (EdgeId e : edge_ids) out_[h.edges[e].tail].push_back(e);
  }
  NodeId node_count() const { return h_->node_count; }
  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e : out_[u]) {
      const HierarchyEdge& he = h_->edges[e];
      f(he.head, he.exact(), he.exact(), e);
    }
  }

 private:
  const Hierarchy* h_;
  std::vector<std::vector<EdgeId>> out_;
};

}  // namespace tdr
