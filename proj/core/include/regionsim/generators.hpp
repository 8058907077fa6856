#pragma once

// Seeded random instances for property checks and benchmarks.

#include <cstdint>
#include <vector>

#include "regionsim/graph.hpp"

namespace regionsim {

struct RandomGraphParams {
  std::uint32_t node_count = 20;
  double radio_range = 1.0;
  double density = 1.6;  // expected nodes per radio_range² of area
  WeightMode weight_mode = WeightMode::Unit;
  std::uint32_t max_attempts = 10'000;
};

struct GeneratedGraph {
  std::vector<NodePos> nodes;
  Digraph graph;  // symmetric unit-disk digraph, strongly connected
  std::uint32_t attempts = 0;
};

/// Uniform placement in a square sized for the requested density, redrawn
/// until connected. Throws Error(Internal) after max_attempts.
GeneratedGraph random_connected_unit_disk(const RandomGraphParams& params, std::uint64_t seed);

/// `count` distinct vertices drawn uniformly, returned sorted.
std::vector<Vertex> random_seeds(std::size_t vertex_count, std::size_t count, std::uint64_t seed);

}  // namespace regionsim
