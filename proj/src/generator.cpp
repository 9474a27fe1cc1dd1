#include "tdr/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdr {

namespace {

// Slopes are kept strictly above -1 so every profile passes the FIFO check
// with margin.
constexpr double kSlopeMargin = 1e-6;

Ttf random_ttf(SplitMix64& rng, const GeneratorSpec& spec) {
  const double period = spec.period;
  const auto k = static_cast<std::uint32_t>(
      rng.range(spec.min_points, std::max(spec.min_points, spec.max_points)));
  const double base = rng.uniform(spec.min_weight, spec.max_weight);
  if (k <= 1) return Ttf::constant(base, period);

  // Stratified breakpoint times keep a guaranteed gap between neighbors.
  std::vector<TtfPoint> pts(k);
  const double slot = period / k;
  for (std::uint32_t i = 0; i < k; ++i) {
    pts[i].time = (i + 0.1 + 0.8 * rng.uniform()) * slot;
    pts[i].value = base * (1.0 + spec.amplitude * (2.0 * rng.uniform() - 1.0));
  }

  // Clamp descents to slope >= -1 + margin, cycling until the wrap segment
  // settles too (raising a value can re-expose its successor).
  for (int round = 0; round < 10; ++round) {
    bool changed = false;
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t j = (i + 1) % k;
      const double dt = (j == 0 ? pts[j].time + period : pts[j].time) - pts[i].time;
      const double floor_v = pts[i].value - (1.0 - kSlopeMargin) * dt;
      if (pts[j].value < floor_v) {
        pts[j].value = floor_v;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Ttf f(std::move(pts), period);
  return f.is_fifo() ? f : Ttf::constant(base, period);
}

}  // namespace

TdGraph generate(const GeneratorSpec& spec) {
  if (spec.amplitude < 0 || spec.amplitude >= 1)
    throw std::invalid_argument("generator: amplitude must be in [0, 1)");
  if (spec.min_weight <= 0 || spec.max_weight < spec.min_weight)
    throw std::invalid_argument("generator: bad weight range");
  if (spec.min_points < 1 || spec.max_points < spec.min_points)
    throw std::invalid_argument("generator: bad point range");

  SplitMix64 rng(spec.seed);
  SplitMix64 topology = rng.split();
  SplitMix64 profiles = rng.split();

  std::vector<std::pair<NodeId, NodeId>> arcs;
  NodeId n = 0;
  if (spec.model == GeneratorSpec::Model::kGrid) {
    if (spec.width < 1 || spec.height < 1)
      throw std::invalid_argument("generator: degenerate grid");
    n = spec.width * spec.height;
    auto id = [&](NodeId x, NodeId y) { return y * spec.width + x; };
    for (NodeId y = 0; y < spec.height; ++y) {
      for (NodeId x = 0; x < spec.width; ++x) {
        if (x + 1 < spec.width) {
          arcs.emplace_back(id(x, y), id(x + 1, y));
          arcs.emplace_back(id(x + 1, y), id(x, y));
        }
        if (y + 1 < spec.height) {
          arcs.emplace_back(id(x, y), id(x, y + 1));
          arcs.emplace_back(id(x, y + 1), id(x, y));
        }
      }
    }
  } else {
    if (spec.nodes < 1) throw std::invalid_argument("generator: degenerate node count");
    n = spec.nodes;
    const auto target = static_cast<std::size_t>(std::llround(n * spec.avg_degree));
    if (n >= 2) {
      // Cycle backbone over a random permutation keeps the graph strongly
      // connected.
      std::vector<NodeId> perm(n);
      for (NodeId v = 0; v < n; ++v) perm[v] = v;
      for (NodeId v = n - 1; v > 0; --v)
        std::swap(perm[v], perm[static_cast<NodeId>(topology.below(v + 1))]);
      for (NodeId v = 0; v < n; ++v) arcs.emplace_back(perm[v], perm[(v + 1) % n]);
      while (arcs.size() < target) {
        auto u = static_cast<NodeId>(topology.below(n));
        auto v = static_cast<NodeId>(topology.below(n));
        if (u != v) arcs.emplace_back(u, v);
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(arcs.size());
  for (const auto& [u, v] : arcs) edges.push_back({u, v, random_ttf(profiles, spec)});
  return TdGraph(n, std::move(edges), spec.period);
}

std::vector<io::QuerySpec> random_queries(NodeId node_count, double period, std::size_t n,
                                          std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<io::QuerySpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = static_cast<NodeId>(rng.below(node_count));
    auto t = static_cast<NodeId>(rng.below(node_count));
    out.push_back({s, t, rng.uniform(0.0, period)});
  }
  return out;
}

}  // namespace tdr
