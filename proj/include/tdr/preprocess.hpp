#pragma once

#include <cstdint>
#include <vector>

#include "tdr/graph.hpp"

namespace tdr {

/// How node-ordering priorities scalarize the time-dependent edge weights:
/// either the mean travel time of each edge, or the priority averaged over a
/// sample of evenly spaced departure times.
struct OrderingStrategy {
  enum class Kind { kAverageWeight, kDepartureSamples };
  Kind kind = Kind::kAverageWeight;
  std::uint32_t samples = 4;  // departure samples (>= 1)
  double edge_difference_weight = 1.0;
  double deleted_neighbors_weight = 1.0;
};

struct ContractionConfig {
  HierarchyMode mode = HierarchyMode::kExact;
  double epsilon = 0.0;
  /// Witness profile searches stop after this many settled labels; truncated
  /// searches only over-estimate witnesses, which keeps acceptance
  /// conservative.
  std::size_t witness_settle_limit = 50;
  std::uint32_t witness_hop_limit = 16;
  /// Approximate mode: re-approximate search labels and shortcut bounds once
  /// they exceed this many breakpoints.
  std::size_t reapprox_points = 64;
};

/// Contraction order by simulated contraction on scalarized weights with a
/// lazy-update priority queue; priority = edge difference + deleted
/// neighbors, ties broken by smaller node id. Returns the nodes in
/// contraction order (ascending rank).
std::vector<NodeId> order_nodes(const TdGraph& graph, const OrderingStrategy& strategy);

/// Stepwise contraction of a graph along a fixed order. Maintains the
/// current overlay (the graph on not-yet-contracted nodes, with shortcuts
/// standing in for removed ones) and accumulates the hierarchy edge set.
///
/// The overlay stores at most one edge per ordered node pair; parallel
/// edges merge into their pointwise envelope, which keeps the overlay and
/// the witness labels from growing with every accepted shortcut. Chaining
/// distributes over pointwise minima on FIFO functions, so a candidate
/// linked from envelopes still unpacks exactly as the minimum over its
/// constituent pairs.
class Contractor {
 public:
  Contractor(const TdGraph& graph, const std::vector<NodeId>& order, ContractionConfig config);

  bool done() const { return next_ >= order_.size(); }
  NodeId next_node() const { return order_[next_]; }

  /// Contracts the next node in the order: for every in/out neighbor pair a
  /// candidate shortcut is linked and kept iff it undercuts the witness
  /// profile somewhere (or no witness was found within the budgets). Returns
  /// the hierarchy edge ids of the accepted shortcuts.
  std::vector<EdgeId> contract_next();

  const std::vector<HierarchyEdge>& edges() const { return edges_; }
  bool contracted(NodeId v) const { return contracted_[v]; }
  std::size_t overlay_edge_count() const;

  /// Finishes contraction (if needed) and assembles the hierarchy.
  Hierarchy finish();

  /// One overlay edge: the envelope of every original edge and accepted
  /// shortcut between its endpoints. `exact` survives as long as only
  /// original functions were merged; approximate mode switches to bounds
  /// once a shortcut takes part.
  struct OverlayEdge {
    NodeId tail;
    NodeId head;
    std::optional<Ttf> exact;
    std::optional<BoundPair> bounds;

    const Ttf& lower() const { return bounds ? bounds->lower : *exact; }
    const Ttf& upper() const { return bounds ? bounds->upper : *exact; }
  };

  /// View of the current overlay for searches and tests.
  class OverlayView {
   public:
    explicit OverlayView(const Contractor& c) : c_(&c) {}
    NodeId node_count() const { return c_->graph_->node_count(); }
    template <class F>
    void for_each_out(NodeId u, F&& f) const {
      for (std::uint32_t id : c_->out_[u]) {
        const OverlayEdge& oe = c_->pool_[id];
        if (c_->contracted_[oe.head]) continue;
        f(oe.head, oe.lower(), oe.upper(), id);
      }
    }

   private:
    const Contractor* c_;
  };
  OverlayView overlay_view() const { return OverlayView(*this); }

 private:
  friend class OverlayView;

  void merge_overlay_edge(OverlayEdge&& oe);
  void remove_node(NodeId v);

  const TdGraph* graph_;
  ContractionConfig config_;
  std::vector<NodeId> order_;
  std::vector<std::uint32_t> rank_;
  std::size_t next_ = 0;
  std::vector<HierarchyEdge> edges_;
  std::vector<OverlayEdge> pool_;
  std::vector<std::vector<std::uint32_t>> out_;  // live overlay adjacency
  std::vector<std::vector<std::uint32_t>> in_;
  std::vector<char> contracted_;
};

/// Contracts all nodes in order and assembles the hierarchy (exact mode or
/// approximate mode with lower/upper bound shortcuts, per the config).
Hierarchy build_hierarchy(const TdGraph& graph, const std::vector<NodeId>& order,
                          const ContractionConfig& config);

/// Replaces every shortcut's bounds in an approximate hierarchy with its
/// exact travel-time function, computed bottom-up by rank from already
/// condensed constituents. The result is an exact-mode hierarchy.
Hierarchy condense(const Hierarchy& atch);

}  // namespace tdr
