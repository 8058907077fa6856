#pragma once

// Boundary cells around region seeds, the boundary dual graph, and routing
// across it.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "regionsim/graph.hpp"

namespace regionsim {

/// Region identifier: the seed (boundary node) vertex anchoring the region.
using RegionId = Vertex;

/// One boundary node per region. Stored sorted; no duplicates.
class RegionSeedSet {
 public:
  RegionSeedSet(std::vector<Vertex> seeds, std::size_t vertex_count);

  std::span<const Vertex> seeds() const { return seeds_; }
  std::size_t size() const { return seeds_.size(); }
  bool contains(Vertex v) const;
  std::optional<std::size_t> index_of(Vertex v) const;

 private:
  std::vector<Vertex> seeds_;
};

/// Distance used to decide the nearest seed.
enum class CellMetric { Hops, Weighted };

/**
 * Assignment of nodes to boundary cells B(v) = {u : τ(u,v) <= τ(u,w) for all w in R}.
 *
 * A node equidistant to several seeds belongs to each of their cells and is
 * listed in tie_nodes(); its canonical owner is the smallest seed.
 */
class BoundaryCellMap {
 public:
  std::span<const RegionId> owners(Vertex u) const { return owners_.at(u); }
  RegionId cell_of(Vertex u) const { return canonical_.at(u); }
  bool in_cell(Vertex u, RegionId seed) const;
  std::span<const Vertex> members(RegionId seed) const;
  std::span<const Vertex> canonical_members(RegionId seed) const;
  std::span<const Vertex> tie_nodes() const { return ties_; }
  double seed_distance(Vertex u) const { return seed_distance_.at(u); }
  const RegionSeedSet& seeds() const { return seeds_; }
  CellMetric metric() const { return metric_; }
  std::size_t vertex_count() const { return canonical_.size(); }

 private:
  friend BoundaryCellMap compute_boundary_cells(const Digraph&, const RegionSeedSet&, CellMetric);
  explicit BoundaryCellMap(RegionSeedSet seeds) : seeds_(std::move(seeds)) {}

  RegionSeedSet seeds_;
  CellMetric metric_ = CellMetric::Hops;
  std::vector<std::vector<RegionId>> owners_;
  std::vector<RegionId> canonical_;
  std::vector<double> seed_distance_;
  std::vector<std::vector<Vertex>> members_;            // indexed by seed position
  std::vector<std::vector<Vertex>> canonical_members_;  // indexed by seed position
  std::vector<Vertex> ties_;
};

/// Throws Error(InvalidInput) naming the first node that cannot reach any seed.
BoundaryCellMap compute_boundary_cells(const Digraph& g, const RegionSeedSet& seeds,
                                       CellMetric metric = CellMetric::Hops);

/// Query matching the cell metric: unit cost for Hops, arc weight for Weighted.
PathQuery metric_query(CellMetric metric);

struct ContainmentCheck {
  bool passed = true;
  std::optional<Vertex> witness;  // first path vertex outside B(v)
  bool touches_tie = false;       // path visits a tie node
  PathResult path;
};

/// Recomputes the shortest u -> cell_of(u) path and checks it stays in the cell.
ContainmentCheck verify_cell_containment(const Digraph& g, const BoundaryCellMap& cells, Vertex u);

struct CrossingArc {
  Vertex from = 0;  // last vertex in the source cell
  Vertex to = 0;    // first vertex in the destination cell
  double weight = 0.0;
};

/**
 * Boundary dual graph BG*: one vertex per cell, an arc wherever a
 * communication arc crosses two cells. The dual weight is the cheapest
 * d(seed_i, a_i) + w(a_i, a_{i+1}) + d(a_{i+1}, seed_{i+1}) over the crossing
 * arcs, with intra-cell distances taken in the canonical cell's induced subgraph.
 */
class BoundaryDualGraph {
 public:
  const Digraph& graph() const { return dual_; }
  RegionId seed_of(Vertex dual_vertex) const { return seeds_.at(dual_vertex); }
  Vertex dual_vertex(RegionId seed) const;
  const CrossingArc& crossing(Vertex dual_from, Vertex dual_to) const;

  /// Intra-cell distance from the node's canonical seed to the node, and back.
  std::optional<double> from_seed(Vertex v) const { return from_seed_.at(v); }
  std::optional<double> to_seed(Vertex v) const { return to_seed_.at(v); }

 private:
  friend BoundaryDualGraph build_boundary_dual_graph(const Digraph&, const BoundaryCellMap&);

  Digraph dual_;
  std::vector<RegionId> seeds_;
  std::vector<std::pair<std::pair<Vertex, Vertex>, CrossingArc>> crossings_;  // sorted
  Distances from_seed_;
  Distances to_seed_;
};

BoundaryDualGraph build_boundary_dual_graph(const Digraph& g, const BoundaryCellMap& cells);

/// Shortest path between two vertices that never leaves the canonical cell `seed`.
std::optional<PathResult> intra_cell_path(const Digraph& g, const BoundaryCellMap& cells,
                                          RegionId seed, Vertex from, Vertex to);

struct BoundaryRoute {
  PathResult direct;                 // P
  PathResult boundary;               // P*, through the seed of every traversed cell
  std::vector<RegionId> cells;       // cells visited by P*, in order
  double ratio = 1.0;                // l(P*) / l(P)
  bool within_bound = true;          // ratio <= e, e = hop count of P
};

/// Empty optional when t is unreachable from s.
std::optional<BoundaryRoute> boundary_route(const Digraph& g, const BoundaryCellMap& cells,
                                            const BoundaryDualGraph& dual, Vertex s, Vertex t);

struct TightnessInstance {
  Digraph graph;
  RegionSeedSet seeds;
  Vertex source = 0;
  Vertex target = 0;
  CellMetric metric = CellMetric::Weighted;
};

/**
 * Instance on which the boundary route is as long as the stretch bound allows:
 * a path s, a_1, ..., a_{e-1}, t with end arcs of weight m and inner arcs of
 * weight eps, where every a_i hangs off its own seed at distance m - eps.
 * Requires e >= 2 and m > eps > 0.
 */
TightnessInstance worst_case_construction(int arc_count, double m, double eps);

}  // namespace regionsim
