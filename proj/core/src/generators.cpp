#include "regionsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "regionsim/error.hpp"

namespace regionsim {

GeneratedGraph random_connected_unit_disk(const RandomGraphParams& params, std::uint64_t seed) {
  if (params.node_count == 0) throw Error(ErrorKind::InvalidInput, "graph needs at least one node");
  if (!(params.radio_range > 0.0) || !(params.density > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "radio range and density must be positive");
  }
  const double side =
      params.radio_range * std::sqrt(static_cast<double>(params.node_count) / params.density);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);

  for (std::uint32_t attempt = 1; attempt <= params.max_attempts; ++attempt) {
    GeneratedGraph out;
    out.attempts = attempt;
    out.nodes.resize(params.node_count);
    for (NodeId i = 0; i < params.node_count; ++i) {
      out.nodes[i].id = i;
      out.nodes[i].x = coord(rng);
      out.nodes[i].y = coord(rng);
      out.nodes[i].radio_range = params.radio_range;
    }
    out.graph = build_unit_disk_digraph(out.nodes, true, params.weight_mode);
    const auto reach = hops_from(out.graph, 0);
    if (std::all_of(reach.begin(), reach.end(), [](const Hops& h) { return h.has_value(); })) {
      return out;
    }
  }
  throw Error(ErrorKind::Internal, fmt::format("no connected {}-node graph after {} attempts",
                                               params.node_count, params.max_attempts));
}

std::vector<Vertex> random_seeds(std::size_t vertex_count, std::size_t count, std::uint64_t seed) {
  if (count == 0 || count > vertex_count) {
    throw Error(ErrorKind::InvalidInput,
                fmt::format("cannot draw {} seeds from {} vertices", count, vertex_count));
  }
  std::vector<Vertex> pool(vertex_count);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace regionsim
