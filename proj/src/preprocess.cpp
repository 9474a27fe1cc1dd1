#include "tdr/preprocess.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "tdr/search.hpp"

namespace tdr {

namespace {

// --- Scalarized simulated contraction for node ordering ---------------------

// Overlay with one scalar weight per ordered node pair, merged by minimum.
struct ScalarOverlay {
  std::vector<std::vector<std::pair<NodeId, double>>> out, in;

  explicit ScalarOverlay(NodeId n) : out(n), in(n) {}

  void add_edge(NodeId u, NodeId v, double w) {
    for (auto& p : out[u]) {
      if (p.first == v) {
        if (w < p.second) {
          p.second = w;
          for (auto& q : in[v]) {
            if (q.first == u) {
              q.second = w;
              break;
            }
          }
        }
        return;
      }
    }
    out[u].emplace_back(v, w);
    in[v].emplace_back(u, w);
  }

  void remove_node(NodeId v) {
    for (auto& p : in[v])
      std::erase_if(out[p.first], [&](const auto& q) { return q.first == v; });
    for (auto& p : out[v])
      std::erase_if(in[p.first], [&](const auto& q) { return q.first == v; });
    out[v].clear();
    in[v].clear();
  }
};

// Bounded scalar Dijkstra with stamped labels, reused across witness runs.
class ScalarWitness {
 public:
  explicit ScalarWitness(NodeId n)
      : dist_(n, 0), hops_(n, 0), stamp_(n, 0), target_stamp_(n, 0), settled_stamp_(n, 0) {}

  void run(const ScalarOverlay& g, NodeId source, NodeId skip,
           const std::vector<std::pair<NodeId, double>>& targets, std::size_t settle_limit,
           std::uint32_t hop_limit) {
    ++round_;
    std::size_t remaining = 0;
    for (const auto& t : targets) {
      if (t.first != source && target_stamp_[t.first] != round_) {
        target_stamp_[t.first] = round_;
        ++remaining;
      }
    }
    MinQueue queue;
    set_dist(source, 0);
    hops_[source] = 0;
    queue.emplace(0.0, source);
    std::size_t settled = 0;
    while (!queue.empty() && remaining > 0 && settled < settle_limit) {
      auto [key, u] = queue.top();
      queue.pop();
      if (settled_stamp_[u] == round_ || key > dist(u)) continue;
      settled_stamp_[u] = round_;
      ++settled;
      if (target_stamp_[u] == round_) {
        target_stamp_[u] = 0;
        --remaining;
      }
      if (hops_[u] >= hop_limit) continue;
      for (const auto& [head, w] : g.out[u]) {
        if (head == skip || settled_stamp_[head] == round_) continue;
        double d = dist(u) + w;
        if (d < dist(head)) {
          set_dist(head, d);
          hops_[head] = hops_[u] + 1;
          queue.emplace(d, head);
        }
      }
    }
  }

  double dist(NodeId v) const { return stamp_[v] == round_ ? dist_[v] : kInf; }

 private:
  void set_dist(NodeId v, double d) {
    dist_[v] = d;
    stamp_[v] = round_;
  }

  std::vector<double> dist_;
  std::vector<std::uint32_t> hops_;
  std::vector<std::uint32_t> stamp_, target_stamp_, settled_stamp_;
  std::uint32_t round_ = 0;
};

constexpr std::size_t kOrderSettleLimit = 50;
constexpr std::uint32_t kOrderHopLimit = 16;

struct ScalarShortcut {
  NodeId tail, head;
  double weight;
};

}  // namespace

std::vector<NodeId> order_nodes(const TdGraph& graph, const OrderingStrategy& strategy) {
  const NodeId n = graph.node_count();
  std::vector<NodeId> order;
  order.reserve(n);
  if (n == 0) return order;

  const std::uint32_t k =
      strategy.kind == OrderingStrategy::Kind::kAverageWeight ? 1 : std::max(1u, strategy.samples);
  std::vector<ScalarOverlay> overlays(k, ScalarOverlay(n));
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    for (std::uint32_t i = 0; i < k; ++i) {
      double w = strategy.kind == OrderingStrategy::Kind::kAverageWeight
                     ? ed.ttf.mean()
                     : ed.ttf.eval(graph.period() * i / k);
      overlays[i].add_edge(ed.tail, ed.head, w);
    }
  }

  // Distinct neighbors in the input graph, for the deleted-neighbors term.
  std::vector<std::vector<NodeId>> neighbors(n);
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    neighbors[graph.edge(e).tail].push_back(graph.edge(e).head);
    neighbors[graph.edge(e).head].push_back(graph.edge(e).tail);
  }
  for (auto& nb : neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  std::vector<std::uint32_t> deleted(n, 0);
  std::vector<char> contracted(n, 0);
  ScalarWitness witness(n);

  // Priority of v by simulated contraction; also collects the scalar
  // shortcuts each overlay would need so a subsequent contraction can reuse
  // them.
  auto evaluate = [&](NodeId v, std::vector<std::vector<ScalarShortcut>>& shortcuts) {
    shortcuts.assign(k, {});
    double edge_diff_sum = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      const ScalarOverlay& o = overlays[i];
      for (const auto& [u, w_in] : o.in[v]) {
        witness.run(o, u, v, o.out[v], kOrderSettleLimit, kOrderHopLimit);
        for (const auto& [w, w_out] : o.out[v]) {
          if (w == u) continue;
          if (witness.dist(w) > w_in + w_out) {
            shortcuts[i].push_back({u, w, w_in + w_out});
          }
        }
      }
      edge_diff_sum += static_cast<double>(shortcuts[i].size()) -
                       static_cast<double>(o.in[v].size() + o.out[v].size());
    }
    return strategy.edge_difference_weight * (edge_diff_sum / k) +
           strategy.deleted_neighbors_weight * deleted[v];
  };

  MinQueue queue;
  std::vector<std::vector<ScalarShortcut>> shortcuts;
  for (NodeId v = 0; v < n; ++v) {
    queue.emplace(evaluate(v, shortcuts), v);
  }

  // Lazy updates: re-evaluate on pop; contract only while still no worse
  // than the next queued candidate (ties to the smaller node id).
  while (order.size() < n) {
    auto [stale, v] = queue.top();
    queue.pop();
    if (contracted[v]) continue;
    double p = evaluate(v, shortcuts);
    if (!queue.empty() && std::make_pair(p, v) > queue.top()) {
      queue.emplace(p, v);
      continue;
    }
    order.push_back(v);
    contracted[v] = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      for (const auto& sc : shortcuts[i]) overlays[i].add_edge(sc.tail, sc.head, sc.weight);
      overlays[i].remove_node(v);
    }
    for (NodeId u : neighbors[v])
      if (!contracted[u]) ++deleted[u];
  }
  return order;
}

// --- Time-dependent contraction ----------------------------------------------

Contractor::Contractor(const TdGraph& graph, const std::vector<NodeId>& order,
                       ContractionConfig config)
    : graph_(&graph), config_(config), order_(order), rank_(ranks_of(order)) {
  if (order_.size() != graph.node_count()) throw std::invalid_argument("order: wrong size");
  out_.resize(graph.node_count());
  in_.resize(graph.node_count());
  contracted_.assign(graph.node_count(), 0);
  edges_.reserve(graph.edge_count() * 2);
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    HierarchyEdge he;
    he.tail = ed.tail;
    he.head = ed.head;
    he.exact_ttf = ed.ttf;
    he.orig_edge = e;
    edges_.push_back(std::move(he));
    merge_overlay_edge({ed.tail, ed.head, ed.ttf, std::nullopt});
  }
}

void Contractor::merge_overlay_edge(OverlayEdge&& oe) {
  for (std::uint32_t id : out_[oe.tail]) {
    OverlayEdge& cur = pool_[id];
    if (cur.head != oe.head) continue;
    if (cur.exact && oe.exact) {
      cur.exact = minimum(*cur.exact, *oe.exact);
    } else {
      BoundPair a = cur.bounds ? *cur.bounds : BoundPair{*cur.exact, *cur.exact};
      BoundPair b = oe.bounds ? *oe.bounds : BoundPair{*oe.exact, *oe.exact};
      cur.bounds = min_bounds(a, b);
      cur.exact.reset();
    }
    return;
  }
  auto id = static_cast<std::uint32_t>(pool_.size());
  out_[oe.tail].push_back(id);
  in_[oe.head].push_back(id);
  pool_.push_back(std::move(oe));
}

void Contractor::remove_node(NodeId v) {
  contracted_[v] = 1;
  for (std::uint32_t id : in_[v]) std::erase(out_[pool_[id].tail], id);
  for (std::uint32_t id : out_[v]) std::erase(in_[pool_[id].head], id);
  out_[v].clear();
  in_[v].clear();
}

std::size_t Contractor::overlay_edge_count() const {
  std::size_t c = 0;
  for (NodeId v = 0; v < out_.size(); ++v)
    if (!contracted_[v])
      for (std::uint32_t id : out_[v])
        if (!contracted_[pool_[id].head]) ++c;
  return c;
}

std::vector<EdgeId> Contractor::contract_next() {
  const NodeId v = order_[next_++];
  const double period = graph_->period();
  const bool approx = config_.mode == HierarchyMode::kApprox;

  std::vector<std::uint32_t> ins, outs;
  std::vector<NodeId> targets;
  for (std::uint32_t id : in_[v])
    if (!contracted_[pool_[id].tail]) ins.push_back(id);
  for (std::uint32_t id : out_[v]) {
    if (contracted_[pool_[id].head]) continue;
    outs.push_back(id);
    targets.push_back(pool_[id].head);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<HierarchyEdge> batch;
  std::vector<OverlayEdge> overlay_batch;
  for (std::uint32_t e1 : ins) {
    const NodeId u = pool_[e1].tail;
    ProfileLabels witness;
    if (!outs.empty()) {
      ProfileOptions wopt;
      wopt.targets = &targets;
      wopt.settle_limit = config_.witness_settle_limit;
      wopt.hop_limit = config_.witness_hop_limit;
      wopt.skip_node = [v](NodeId x) { return x == v; };
      if (approx) {
        wopt.use_upper = true;
        wopt.simplify_points = config_.reapprox_points;
        wopt.simplify_epsilon = config_.epsilon;
      }
      witness = profile_dijkstra(overlay_view(), u, period, wopt);
    }
    for (std::uint32_t e2 : outs) {
      const NodeId w = pool_[e2].head;
      if (w == u) continue;
      const OverlayEdge& a = pool_[e1];
      const OverlayEdge& b = pool_[e2];

      HierarchyEdge sc;
      sc.tail = u;
      sc.head = w;
      sc.middle = v;
      OverlayEdge oe{u, w, std::nullopt, std::nullopt};
      const Ttf* candidate_lower = nullptr;
      if (!approx) {
        sc.exact_ttf = link(*a.exact, *b.exact);
        candidate_lower = &*sc.exact_ttf;
        oe.exact = sc.exact_ttf;
      } else {
        // One-level candidates (only original functions below) get a fresh
        // approximation of their exact chain; nested ones compose bounds.
        BoundPair bp = (a.exact && b.exact)
                           ? approximate(link(*a.exact, *b.exact), config_.epsilon)
                           : link_bounds(BoundPair{a.lower(), a.upper()},
                                         BoundPair{b.lower(), b.upper()});
        if (config_.reapprox_points > 0 &&
            bp.lower.size() + bp.upper.size() > 2 * config_.reapprox_points) {
          bp.lower = approximate(bp.lower, config_.epsilon).lower;
          bp.upper = approximate(bp.upper, config_.epsilon).upper;
        }
        sc.bounds = bp;
        candidate_lower = &sc.bounds->lower;
        oe.bounds = std::move(bp);
      }

      // The candidate is needed wherever it undercuts the witness; with no
      // witness label the whole period stays valid (conservative when the
      // search was truncated).
      if (witness.label.empty() || !witness.label[w]) {
        sc.validity = {TimeInterval{0.0, period}};
      } else {
        sc.validity = undercut_intervals(*candidate_lower, *witness.label[w]);
      }
      if (sc.validity.empty()) continue;
      batch.push_back(std::move(sc));
      overlay_batch.push_back(std::move(oe));
    }
  }

  std::vector<EdgeId> accepted;
  accepted.reserve(batch.size());
  for (auto& sc : batch) {
    accepted.push_back(static_cast<EdgeId>(edges_.size()));
    edges_.push_back(std::move(sc));
  }
  for (auto& oe : overlay_batch) merge_overlay_edge(std::move(oe));
  remove_node(v);
  return accepted;
}

Hierarchy Contractor::finish() {
  if (!done()) throw std::logic_error("contractor: contraction incomplete");
  Hierarchy h;
  h.node_count = graph_->node_count();
  h.period = graph_->period();
  h.mode = config_.mode;
  h.epsilon = config_.mode == HierarchyMode::kApprox ? config_.epsilon : 0.0;
  h.rank = rank_;
  h.edges = edges_;
  h.finalize();
  return h;
}

Hierarchy build_hierarchy(const TdGraph& graph, const std::vector<NodeId>& order,
                          const ContractionConfig& config) {
  Contractor c(graph, order, config);
  while (!c.done()) c.contract_next();
  return c.finish();
}

Hierarchy condense(const Hierarchy& atch) {
  if (atch.mode != HierarchyMode::kApprox)
    throw std::invalid_argument("condense: hierarchy is not approximate");
  Hierarchy out = atch;
  out.mode = HierarchyMode::kExact;
  out.epsilon = 0.0;

  // Bottom-up by middle rank: constituents are condensed before any shortcut
  // that uses them. With parallel constituents the exact function is their
  // envelope, which is what the searches relax.
  std::vector<EdgeId> shortcuts;
  for (EdgeId e = 0; e < out.edges.size(); ++e)
    if (out.edges[e].is_shortcut()) shortcuts.push_back(e);
  std::sort(shortcuts.begin(), shortcuts.end(), [&](EdgeId a, EdgeId b) {
    auto ka = std::make_pair(out.rank[out.edges[a].middle], a);
    auto kb = std::make_pair(out.rank[out.edges[b].middle], b);
    return ka < kb;
  });

  for (EdgeId e : shortcuts) {
    std::optional<Ttf> exact;
    for (auto [e1, e2] : out.eligible_parts(e)) {
      Ttf chained = link(out.edges[e1].exact(), out.edges[e2].exact());
      exact = exact ? minimum(*exact, chained) : std::move(chained);
    }
    out.edges[e].exact_ttf = std::move(exact);
    out.edges[e].bounds.reset();
  }
  out.finalize();
  return out;
}

}  // namespace tdr
