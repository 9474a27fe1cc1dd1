#pragma once

#include <cstdint>
#include <vector>

#include "tdr/graph.hpp"
#include "tdr/io.hpp"
#include "tdr/rng.hpp"

namespace tdr {

/// Synthetic instance description. Grid graphs are 4-neighbor bidirected;
/// random graphs get a random cycle backbone (strong connectivity) plus
/// uniformly random extra edges up to the requested average degree. Each
/// edge's travel-time profile has `min_points..max_points` breakpoints around
/// a base weight, with peaks up to `amplitude` times the base; slopes are
/// clamped so every generated profile is FIFO. Deterministic for a fixed
/// seed.
struct GeneratorSpec {
  enum class Model { kGrid, kRandom };
  Model model = Model::kGrid;
  NodeId width = 10;
  NodeId height = 10;
  NodeId nodes = 100;
  double avg_degree = 3.0;
  std::uint32_t min_points = 2;
  std::uint32_t max_points = 8;
  double min_weight = 30.0;
  double max_weight = 300.0;
  double amplitude = 0.5;  // in [0, 1)
  double period = 86400.0;
  std::uint64_t seed = 1;
};

TdGraph generate(const GeneratorSpec& spec);

/// n random (s, t, tau) triples over the given node universe.
std::vector<io::QuerySpec> random_queries(NodeId node_count, double period, std::size_t n,
                                          std::uint64_t seed);

}  // namespace tdr
