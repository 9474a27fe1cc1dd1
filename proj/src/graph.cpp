#include "tdr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdr {

TdGraph::TdGraph(NodeId node_count, std::vector<Edge> edges, double period)
    : node_count_(node_count), period_(period), edges_(std::move(edges)) {
  if (!(period_ > 0)) throw std::invalid_argument("graph: period must be positive");
  out_.resize(node_count_);
  in_.resize(node_count_);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.tail >= node_count_ || ed.head >= node_count_)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (ed.tail == ed.head) throw std::invalid_argument("graph: self-loop");
    if (ed.ttf.period() != period_) throw std::invalid_argument("graph: edge period mismatch");
    if (!ed.ttf.is_fifo()) throw std::invalid_argument("graph: edge violates FIFO");
    out_[ed.tail].push_back(e);
    in_[ed.head].push_back(e);
  }
}

namespace {

void require_permutation(const std::vector<std::uint32_t>& rank, NodeId n) {
  if (rank.size() != n) throw std::invalid_argument("order: wrong size");
  std::vector<char> seen(n, 0);
  for (std::uint32_t r : rank) {
    if (r >= n || seen[r]) throw std::invalid_argument("order: not a permutation");
    seen[r] = 1;
  }
}

}  // namespace

std::vector<std::uint32_t> ranks_of(const std::vector<NodeId>& order) {
  std::vector<std::uint32_t> rank(order.size());
  require_permutation(order, static_cast<NodeId>(order.size()));
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

std::pair<std::vector<EdgeId>, std::vector<EdgeId>> split_by_order(
    const TdGraph& graph, const std::vector<NodeId>& order) {
  std::vector<std::uint32_t> rank = ranks_of(order);
  if (order.size() != graph.node_count()) throw std::invalid_argument("order: wrong size");
  std::vector<EdgeId> up, down;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    (rank[ed.tail] < rank[ed.head] ? up : down).push_back(e);
  }
  return {std::move(up), std::move(down)};
}

void Hierarchy::finalize() {
  require_permutation(rank, node_count);
  up_out_.assign(node_count, {});
  down_out_.assign(node_count, {});
  down_in_.assign(node_count, {});
  all_in_.assign(node_count, {});
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const HierarchyEdge& he = edges[e];
    if (rank[he.tail] < rank[he.head]) {
      up_out_[he.tail].push_back(e);
    } else {
      down_out_[he.tail].push_back(e);
      down_in_[he.head].push_back(e);
    }
    all_in_[he.head].push_back(e);
  }
  resolve_parts();
}

std::vector<EdgeId> Hierarchy::up_edge_ids() const {
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < edges.size(); ++e)
    if (goes_up(e)) ids.push_back(e);
  return ids;
}

std::vector<EdgeId> Hierarchy::down_edge_ids() const {
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < edges.size(); ++e)
    if (!goes_up(e)) ids.push_back(e);
  return ids;
}

std::vector<std::pair<EdgeId, EdgeId>> Hierarchy::eligible_parts(EdgeId shortcut) const {
  const HierarchyEdge& s = edges[shortcut];
  std::vector<std::pair<EdgeId, EdgeId>> pairs;
  // The first constituent descends from tail into middle, the second climbs
  // from middle to head. Constituents existed when the middle node was
  // contracted, so their own middles rank strictly below it.
  auto eligible = [&](EdgeId e) {
    const HierarchyEdge& he = edges[e];
    return !he.is_shortcut() || rank[he.middle] < rank[s.middle];
  };
  for (EdgeId e1 : down_out_[s.tail]) {
    if (edges[e1].head != s.middle || !eligible(e1)) continue;
    for (EdgeId e2 : up_out_[s.middle]) {
      if (edges[e2].head != s.head || !eligible(e2)) continue;
      pairs.emplace_back(e1, e2);
    }
  }
  return pairs;
}

namespace {

std::vector<double> score_samples(const Ttf& ref) {
  std::vector<double> taus;
  const std::size_t n = std::min<std::size_t>(ref.size(), 48);
  for (std::size_t i = 0; i < n; ++i) taus.push_back(ref.points()[i].time);
  for (int i = 0; i < 16; ++i) taus.push_back(ref.period() * (i + 0.5) / 16.0);
  return taus;
}

double exact_match_score(const Ttf& candidate, const Ttf& ref) {
  double score = 0;
  for (double tau : score_samples(ref)) {
    double a = candidate.eval(tau);
    double b = ref.eval(tau);
    score += std::fabs(a - b) / std::max(1.0, std::fabs(b));
  }
  return score;
}

double bounds_gap_score(const Ttf& cand_lo, const Ttf& cand_up, const HierarchyEdge& s) {
  double score = 0;
  for (double tau : score_samples(s.upper())) {
    score += std::max(0.0, cand_lo.eval(tau) - s.upper().eval(tau));
    score += std::max(0.0, s.lower().eval(tau) - cand_up.eval(tau));
  }
  return score;
}

}  // namespace

void Hierarchy::resolve_parts() {
  for (EdgeId e = 0; e < edges.size(); ++e) {
    HierarchyEdge& s = edges[e];
    if (!s.is_shortcut()) continue;
    auto pairs = eligible_parts(e);
    if (pairs.empty()) throw std::runtime_error("hierarchy: shortcut without constituents");
    std::size_t best = 0;
    if (pairs.size() > 1) {
      double best_score = kInf;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const HierarchyEdge& a = edges[pairs[i].first];
        const HierarchyEdge& b = edges[pairs[i].second];
        double score = s.bounds ? bounds_gap_score(link(a.lower(), b.lower()),
                                                   link(a.upper(), b.upper()), s)
                                : exact_match_score(link(a.exact(), b.exact()), s.exact());
        if (score < best_score) {
          best_score = score;
          best = i;
        }
      }
    }
    s.part1 = pairs[best].first;
    s.part2 = pairs[best].second;
  }
}

std::vector<EdgeId> unpack_edge(const Hierarchy& h, EdgeId e) {
  std::vector<EdgeId> out;
  // Iterative expansion; middle ranks strictly decrease, so this terminates.
  std::vector<EdgeId> stack{e};
  while (!stack.empty()) {
    EdgeId cur = stack.back();
    stack.pop_back();
    const HierarchyEdge& he = h.edges[cur];
    if (!he.is_shortcut()) {
      out.push_back(cur);
    } else {
      stack.push_back(he.part2);
      stack.push_back(he.part1);
    }
  }
  return out;
}

double eval_unpacked(const Hierarchy& h, EdgeId e, double tau) {
  const HierarchyEdge& he = h.edges[e];
  if (!he.is_shortcut()) return he.exact().eval(tau);
  // Descend into the constituent pair that is fastest at this departure;
  // with parallel constituents the shortcut's function is their envelope.
  double best = kInf;
  for (auto [e1, e2] : h.eligible_parts(e)) {
    double t1 = eval_unpacked(h, e1, tau);
    double t2 = eval_unpacked(h, e2, tau + t1);
    best = std::min(best, t1 + t2);
  }
  return best;
}

}  // namespace tdr
