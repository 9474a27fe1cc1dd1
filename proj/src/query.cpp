#include "tdr/query.hpp"

#include <algorithm>
#include <stdexcept>

namespace tdr {

namespace {

void require_mode(const Hierarchy& h, HierarchyMode mode, const char* what) {
  if (h.mode != mode) throw std::invalid_argument(what);
}

void require_nodes(NodeId s, NodeId t, NodeId n) {
  if (s >= n || t >= n) throw std::invalid_argument("query: node out of range");
}

// Chain of view edge references from s to t, in travel order.
std::vector<EdgeId> parent_chain(const ScalarLabels& lab, NodeId s, NodeId t) {
  std::vector<EdgeId> chain;
  for (NodeId x = t; x != s; x = lab.parent[x]) chain.push_back(lab.parent_edge[x]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

QueryResult empty_result(NodeId s, NodeId t, double tau0) {
  QueryResult r;
  r.source = s;
  r.target = t;
  r.departure = tau0;
  return r;
}

QueryResult assemble(const Hierarchy& h, NodeId s, NodeId t, double tau0,
                     const ScalarLabels& lab, QueryStats stats) {
  QueryResult r = empty_result(s, t, tau0);
  r.stats = stats;
  if (!lab.reached(t)) return r;
  r.found = true;
  r.arrival = lab.arrival[t];
  r.travel_time = r.arrival - tau0;
  r.path = unpack_path(h, parent_chain(lab, s, t), tau0);
  return r;
}

// Upper bound on the s->t travel time: pick the statically optimal path in
// the search space, unpack it and evaluate it time-dependently. Returns
// false if t is not reachable at all.
bool static_upper_bound(const Hierarchy& h, const UpMarkedView& view, NodeId s, NodeId t,
                        double tau0, double& lower_out, double& upper_out) {
  StaticLabels stat = static_dijkstra(view, s, StaticWeight::kMin, t);
  if (stat.dist[t] == kInf) return false;
  double arr = tau0;
  std::vector<EdgeId> chain;
  for (NodeId x = t; x != s; x = stat.parent[x]) chain.push_back(stat.parent_edge[x]);
  std::reverse(chain.begin(), chain.end());
  for (EdgeId e : chain) arr += eval_unpacked(h, e, arr);
  lower_out = stat.dist[t];
  upper_out = arr - tau0;
  return true;
}

}  // namespace

BackwardSpace backward_mark(const Hierarchy& h, NodeId t, BackwardMethod method,
                            std::optional<TimeInterval> window) {
  if (t >= h.node_count) throw std::invalid_argument("backward_mark: target out of range");
  BackwardSpace bs;
  bs.reached.assign(h.node_count, 0);
  bs.lower_bound.assign(h.node_count, 0.0);

  std::vector<NodeId> stack{t};
  bs.reached[t] = 1;
  bs.reached_count = 1;
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (EdgeId e : h.down_in(x)) {
      bs.marked.push_back(e);
      NodeId u = h.edges[e].tail;
      if (!bs.reached[u]) {
        bs.reached[u] = 1;
        ++bs.reached_count;
        stack.push_back(u);
      }
    }
  }

  // Bounds run over the reverse of the whole edge set: the remaining travel
  // of a forward-search node may climb before it descends, so a bound over
  // down-edges alone would over-prune.
  if (method == BackwardMethod::kStaticMin) {
    StaticLabels lab = static_dijkstra(ReverseAllView(h), t, StaticWeight::kMin);
    for (NodeId v = 0; v < h.node_count; ++v)
      if (lab.dist[v] < kInf) bs.lower_bound[v] = lab.dist[v];
  } else if (method == BackwardMethod::kInterval) {
    if (!window) throw std::invalid_argument("backward_mark: interval method needs a window");
    IntervalLabels lab =
        interval_dijkstra(ReverseAllView(h), t, *window, h.period, WindowKind::kArrival);
    for (NodeId v = 0; v < h.node_count; ++v)
      if (lab.low[v] < kInf) bs.lower_bound[v] = lab.low[v];
  }
  return bs;
}

QueryResult tch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0) {
  require_mode(h, HierarchyMode::kExact, "tch_query: hierarchy is not exact");
  require_nodes(s, t, h.node_count);
  BackwardSpace bs = backward_mark(h, t, BackwardMethod::kReachabilityOnly);
  UpMarkedView view(h, &bs.reached);
  TdDijkstraOptions opt;
  opt.target = t;
  ScalarLabels lab = td_dijkstra(view, s, tau0, opt);
  return assemble(h, s, t, tau0, lab,
                  {lab.settled_count, lab.relaxed_count, bs.marked.size()});
}

QueryResult pruned_tch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0,
                             PruningMethod method, std::optional<TimeInterval> window) {
  require_mode(h, HierarchyMode::kExact, "pruned_tch_query: hierarchy is not exact");
  require_nodes(s, t, h.node_count);

  BackwardSpace bs = backward_mark(h, t, BackwardMethod::kStaticMin);
  UpMarkedView view(h, &bs.reached);
  double lower = 0, upper = 0;
  if (!static_upper_bound(h, view, s, t, tau0, lower, upper)) {
    QueryResult r = empty_result(s, t, tau0);
    r.stats.marked = bs.marked.size();
    return r;
  }
  if (method == PruningMethod::kInterval) {
    TimeInterval w = window.value_or(TimeInterval{tau0 + lower, tau0 + upper});
    bs = backward_mark(h, t, BackwardMethod::kInterval, w);
  }

  const double tol = 1e-9 * std::max(1.0, upper);
  TdDijkstraOptions opt;
  opt.target = t;
  opt.prune = [&](NodeId v, double travel) { return travel + bs.lower_bound[v] > upper + tol; };
  ScalarLabels lab = td_dijkstra(UpMarkedView(h, &bs.reached), s, tau0, opt);
  return assemble(h, s, t, tau0, lab,
                  {lab.settled_count, lab.relaxed_count, bs.marked.size()});
}

QueryResult atch_query(const Hierarchy& h, NodeId s, NodeId t, double tau0) {
  require_mode(h, HierarchyMode::kApprox, "atch_query: hierarchy is not approximate");
  require_nodes(s, t, h.node_count);

  BackwardSpace bs = backward_mark(h, t, BackwardMethod::kStaticMin);
  UpMarkedView view(h, &bs.reached);
  double lower = 0, upper = 0;
  if (!static_upper_bound(h, view, s, t, tau0, lower, upper)) {
    QueryResult r = empty_result(s, t, tau0);
    r.stats.marked = bs.marked.size();
    return r;
  }
  const double tol = 1e-9 * std::max(1.0, upper);

  // Phase 1: conservative corridor. Propagate per-node travel-time bound
  // pairs; an edge survives iff even its optimistic use cannot beat the
  // upper bound U. FIFO makes tau + f(tau) monotone, so the interval
  // arithmetic per relaxation is just an evaluation at each interval end.
  const NodeId n = h.node_count;
  std::vector<double> lo(n, kInf), hi(n, kInf);
  std::vector<char> settled(n, 0);
  std::size_t settled_count = 0, relaxed_count = 0;
  std::vector<EdgeId> surviving;
  MinQueue queue;
  lo[s] = hi[s] = 0;
  queue.emplace(0.0, s);
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    if (settled[u] || key > lo[u]) continue;
    settled[u] = 1;
    ++settled_count;
    view.for_each_out(u, [&](NodeId head, const Ttf& elo, const Ttf& ehi, EdgeId e) {
      ++relaxed_count;
      double cand_lo = lo[u] + elo.eval(tau0 + lo[u]);
      double cand_hi = hi[u] + ehi.eval(tau0 + hi[u]);
      if (cand_lo + bs.lower_bound[head] > upper + tol) return;
      surviving.push_back(e);
      if (cand_hi < hi[head]) hi[head] = cand_hi;
      if (cand_lo < lo[head]) {
        lo[head] = cand_lo;
        queue.emplace(cand_lo, head);
      }
    });
  }

  // Phase 2: unpack all surviving edges to original edges, conservatively
  // over every constituent pair a shortcut could stand for.
  std::vector<char> seen(h.edges.size(), 0);
  std::vector<EdgeId> originals;
  std::vector<EdgeId> stack = surviving;
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    if (seen[e]) continue;
    seen[e] = 1;
    if (!h.edges[e].is_shortcut()) {
      originals.push_back(e);
      continue;
    }
    for (auto [e1, e2] : h.eligible_parts(e)) {
      stack.push_back(e1);
      stack.push_back(e2);
    }
  }

  // Phase 3: exact forward search in the unpacked subgraph.
  SubgraphView sub(h, originals);
  TdDijkstraOptions opt;
  opt.target = t;
  ScalarLabels lab = td_dijkstra(sub, s, tau0, opt);
  return assemble(h, s, t, tau0, lab,
                  {settled_count + lab.settled_count, relaxed_count + lab.relaxed_count,
                   bs.marked.size()});
}

std::optional<Ttf> profile_query(const TdGraph& graph, NodeId s, NodeId t) {
  require_nodes(s, t, graph.node_count());
  if (s == t) return Ttf::constant(0.0, graph.period());
  std::vector<NodeId> targets{t};
  ProfileOptions opt;
  opt.targets = &targets;
  ProfileLabels lab = profile_dijkstra(BaseView(graph), s, graph.period(), opt);
  return lab.label[t];
}

std::optional<Ttf> profile_query(const Hierarchy& h, NodeId s, NodeId t) {
  require_mode(h, HierarchyMode::kExact, "profile_query: hierarchy is not exact");
  require_nodes(s, t, h.node_count);
  if (s == t) return Ttf::constant(0.0, h.period);
  BackwardSpace bs = backward_mark(h, t, BackwardMethod::kReachabilityOnly);
  std::vector<NodeId> targets{t};
  ProfileOptions opt;
  opt.targets = &targets;
  ProfileLabels lab = profile_dijkstra(UpMarkedView(h, &bs.reached), s, h.period, opt);
  return lab.label[t];
}

namespace {

// Descends into the constituent pair that is fastest at the passage time.
double descend(const Hierarchy& h, EdgeId e, double tau, PathResult& out) {
  const HierarchyEdge& he = h.edges[e];
  if (!he.is_shortcut()) {
    out.edges.push_back(he.orig_edge != kNoEdge ? he.orig_edge : e);
    out.departures.push_back(tau);
    return he.exact().eval(tau);
  }
  auto pairs = h.eligible_parts(e);
  std::size_t best = 0;
  if (pairs.size() > 1) {
    double best_val = kInf;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double t1 = eval_unpacked(h, pairs[i].first, tau);
      double t2 = eval_unpacked(h, pairs[i].second, tau + t1);
      if (t1 + t2 < best_val) {
        best_val = t1 + t2;
        best = i;
      }
    }
  }
  double t1 = descend(h, pairs[best].first, tau, out);
  double t2 = descend(h, pairs[best].second, tau + t1, out);
  return t1 + t2;
}

}  // namespace

PathResult unpack_path(const Hierarchy& h, const std::vector<EdgeId>& chain, double tau0) {
  PathResult out;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (h.edges[chain[i]].tail != h.edges[chain[i - 1]].head)
      throw std::invalid_argument("unpack_path: edges are not connected");
  }
  double tau = tau0;
  for (EdgeId e : chain) tau += descend(h, e, tau, out);
  out.travel_time = tau - tau0;
  return out;
}

QueryResult td_dijkstra_query(const TdGraph& graph, NodeId s, NodeId t, double tau0) {
  require_nodes(s, t, graph.node_count());
  TdDijkstraOptions opt;
  opt.target = t;
  ScalarLabels lab = td_dijkstra(BaseView(graph), s, tau0, opt);
  QueryResult r = empty_result(s, t, tau0);
  r.stats = {lab.settled_count, lab.relaxed_count, 0};
  if (!lab.reached(t)) return r;
  r.found = true;
  r.arrival = lab.arrival[t];
  r.travel_time = r.arrival - tau0;
  double tau = tau0;
  for (EdgeId e : parent_chain(lab, s, t)) {
    r.path.edges.push_back(e);
    r.path.departures.push_back(tau);
    tau += graph.edge(e).ttf.eval(tau);
  }
  r.path.travel_time = tau - tau0;
  return r;
}

QueryResult td_dijkstra_query(const Hierarchy& h, NodeId s, NodeId t, double tau0) {
  require_nodes(s, t, h.node_count);
  std::vector<EdgeId> originals;
  for (EdgeId e = 0; e < h.edges.size(); ++e)
    if (!h.edges[e].is_shortcut()) originals.push_back(e);
  SubgraphView sub(h, originals);
  TdDijkstraOptions opt;
  opt.target = t;
  ScalarLabels lab = td_dijkstra(sub, s, tau0, opt);
  return assemble(h, s, t, tau0, lab, {lab.settled_count, lab.relaxed_count, 0});
}

}  // namespace tdr
