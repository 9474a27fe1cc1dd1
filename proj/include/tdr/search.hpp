#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "tdr/graph.hpp"
#include "tdr/ttf.hpp"

namespace tdr {

// Min-queue with decrease-key by lazy re-insertion; ties break on node id
// so runs are reproducible.
using MinQueue =
    std::priority_queue<std::pair<double, NodeId>, std::vector<std::pair<double, NodeId>>,
                        std::greater<>>;

/// Labels of a scalar time-dependent search. FIFO weights make the search
/// label-setting: settled arrivals are final and non-decreasing in settle
/// order.
struct ScalarLabels {
  std::vector<double> arrival;      // absolute seconds; kInf if unreached
  std::vector<NodeId> parent;       // predecessor node
  std::vector<EdgeId> parent_edge;  // view-specific edge reference
  std::vector<char> settled;
  std::size_t settled_count = 0;
  std::size_t relaxed_count = 0;
  NodeId source = kNoNode;
  double departure = 0;

  double travel(NodeId v) const { return arrival[v] - departure; }
  bool reached(NodeId v) const { return arrival[v] < kInf; }
};

struct TdDijkstraOptions {
  std::optional<NodeId> target;
  /// Return true to drop a node from the queue; called with the node and its
  /// tentative travel time. Used for upper-bound pruning.
  std::function<bool(NodeId, double)> prune;
  /// Return false to skip an edge (by view edge reference).
  std::function<bool(EdgeId)> edge_filter;
};

/// Time-dependent Dijkstra from `source` departing at `tau0`. Relaxing an
/// edge evaluates its travel-time function at the tail's arrival time.
/// Stops early once the target settles. Unreached nodes keep arrival kInf.
template <class View>
ScalarLabels td_dijkstra(const View& view, NodeId source, double tau0,
                         const TdDijkstraOptions& opt = {}) {
  const NodeId n = view.node_count();
  ScalarLabels lab;
  lab.arrival.assign(n, kInf);
  lab.parent.assign(n, kNoNode);
  lab.parent_edge.assign(n, kNoEdge);
  lab.settled.assign(n, 0);
  lab.source = source;
  lab.departure = tau0;

  MinQueue queue;
  lab.arrival[source] = tau0;
  queue.emplace(tau0, source);
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (lab.settled[u] || key > lab.arrival[u]) continue;
    lab.settled[u] = 1;
    ++lab.settled_count;
    if (opt.target && u == *opt.target) break;
    view.for_each_out(u, [&](NodeId head, const Ttf&, const Ttf& ttf, EdgeId ref) {
      if (lab.settled[head]) return;
      if (opt.edge_filter && !opt.edge_filter(ref)) return;
      ++lab.relaxed_count;
      double arr = lab.arrival[u] + ttf.eval(lab.arrival[u]);
      if (arr < lab.arrival[head]) {
        if (opt.prune && opt.prune(head, arr - tau0)) return;
        lab.arrival[head] = arr;
        lab.parent[head] = u;
        lab.parent_edge[head] = ref;
        queue.emplace(arr, head);
      }
    });
  }
  return lab;
}

/// Labels of a profile search: per node the pointwise-minimal travel-time
/// function from the source over all departures.
struct ProfileLabels {
  std::vector<std::optional<Ttf>> label;
  std::size_t settled_count = 0;
  bool truncated = false;  // hit a settle or hop budget before finishing
};

struct ProfileOptions {
  /// When set, the search stops once no queued improvement can change any
  /// target's label.
  const std::vector<NodeId>* targets = nullptr;
  std::size_t settle_limit = static_cast<std::size_t>(-1);
  std::uint32_t hop_limit = static_cast<std::uint32_t>(-1);
  /// Propagate upper-bound functions instead of exact ones (identical on
  /// exact views).
  bool use_upper = false;
  /// Re-approximate a label whenever it exceeds this many breakpoints
  /// (0 disables). Keeps labels upper bounds; only meaningful with
  /// use_upper.
  std::size_t simplify_points = 0;
  double simplify_epsilon = 0;
  /// Nodes to exclude from the search entirely.
  std::function<bool(NodeId)> skip_node;
};

/// Label-correcting profile search: a node re-enters the queue whenever its
/// tentative function improves anywhere (exact envelope comparison, not
/// sampling). Queue key is the label's global minimum.
template <class View>
ProfileLabels profile_dijkstra(const View& view, NodeId source, double period,
                               const ProfileOptions& opt = {}) {
  const NodeId n = view.node_count();
  ProfileLabels out;
  out.label.assign(n, std::nullopt);
  std::vector<std::uint32_t> hops(n, 0);

  MinQueue queue;
  out.label[source] = Ttf::constant(0.0, period);
  queue.emplace(0.0, source);

  auto targets_done = [&](double frontier_min) {
    if (!opt.targets) return false;
    for (NodeId t : *opt.targets) {
      if (!out.label[t]) return false;
      if (frontier_min < out.label[t]->global_max()) return false;
    }
    return true;
  };

  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (!out.label[u] || key > out.label[u]->global_min()) continue;  // stale entry
    if (targets_done(key)) break;
    if (out.settled_count >= opt.settle_limit) {
      out.truncated = true;
      break;
    }
    ++out.settled_count;
    if (hops[u] >= opt.hop_limit) {
      out.truncated = true;
      continue;
    }
    view.for_each_out(u, [&](NodeId head, const Ttf& lower, const Ttf& upper, EdgeId) {
      if (opt.skip_node && opt.skip_node(head)) return;
      const Ttf& weight = opt.use_upper ? upper : lower;
      Ttf cand = link(*out.label[u], weight);
      if (out.label[head]) {
        if (undercut_intervals(cand, *out.label[head]).empty()) return;
        cand = minimum(*out.label[head], cand);
      }
      if (opt.simplify_points > 0 && cand.size() > opt.simplify_points) {
        cand = approximate(cand, opt.simplify_epsilon).upper;
      }
      double key2 = cand.global_min();
      out.label[head] = std::move(cand);
      hops[head] = hops[u] + 1;
      queue.emplace(key2, head);
    });
  }
  return out;
}

enum class StaticWeight { kMin, kMax };

/// Classic Dijkstra under scalar weights: the global minimum (lower bound)
/// or global maximum (upper bound) of each edge's travel-time function.
struct StaticLabels {
  std::vector<double> dist;
  std::vector<NodeId> parent;
  std::vector<EdgeId> parent_edge;
  std::size_t settled_count = 0;
};

template <class View>
StaticLabels static_dijkstra(const View& view, NodeId source, StaticWeight sel,
                             std::optional<NodeId> target = std::nullopt) {
  const NodeId n = view.node_count();
  StaticLabels lab;
  lab.dist.assign(n, kInf);
  lab.parent.assign(n, kNoNode);
  lab.parent_edge.assign(n, kNoEdge);
  std::vector<char> settled(n, 0);

  MinQueue queue;
  lab.dist[source] = 0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (settled[u] || key > lab.dist[u]) continue;
    settled[u] = 1;
    ++lab.settled_count;
    if (target && u == *target) break;
    view.for_each_out(u, [&](NodeId head, const Ttf& lower, const Ttf& upper, EdgeId ref) {
      if (settled[head]) return;
      double w = sel == StaticWeight::kMin ? lower.global_min() : upper.global_max();
      double d = lab.dist[u] + w;
      if (d < lab.dist[head]) {
        lab.dist[head] = d;
        lab.parent[head] = u;
        lab.parent_edge[head] = ref;
        queue.emplace(d, head);
      }
    });
  }
  return lab;
}

/// Per-node scalar lower bounds on travel time over a departure (or, for
/// backward searches, arrival) window.
struct IntervalLabels {
  std::vector<double> low;  // kInf if unreached
  std::size_t settled_count = 0;
};

enum class WindowKind {
  kDeparture,  // the window constrains departures at the source
  kArrival     // the window constrains arrivals; used on reversed views
};

/// Variant of Dijkstra computing minimum travel times over a time window.
/// Every edge is relaxed with its minimum over the departure times that are
/// feasible given the window; the feasible range per node comes from the
/// settled lower bound and a static maximum-weight distance. Whenever that
/// range spans a full period it conservatively collapses to the edge's
/// global minimum, so the labels stay valid lower bounds.
template <class View>
IntervalLabels interval_dijkstra(const View& view, NodeId source, TimeInterval window,
                                 double period, WindowKind kind = WindowKind::kDeparture) {
  const NodeId n = view.node_count();
  StaticLabels umax = static_dijkstra(view, source, StaticWeight::kMax);

  IntervalLabels lab;
  lab.low.assign(n, kInf);
  std::vector<char> settled(n, 0);

  MinQueue queue;
  lab.low[source] = 0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (settled[u] || key > lab.low[u]) continue;
    settled[u] = 1;
    ++lab.settled_count;
    view.for_each_out(u, [&](NodeId head, const Ttf& lower, const Ttf& upper, EdgeId) {
      if (settled[head]) return;
      double wl, wh;
      if (kind == WindowKind::kDeparture) {
        wl = window.begin + lab.low[u];
        wh = window.end + umax.dist[u];
      } else {
        wl = window.begin - umax.dist[u] - upper.global_max();
        wh = window.end - lab.low[u] - lower.global_min();
      }
      double m = (!(wh >= wl) || wh - wl >= period) ? lower.global_min() : lower.min_on(wl, wh);
      double d = lab.low[u] + m;
      if (d < lab.low[head]) {
        lab.low[head] = d;
        queue.emplace(d, head);
      }
    });
  }
  return lab;
}

}  // namespace tdr
