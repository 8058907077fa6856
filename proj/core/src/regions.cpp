#include "regionsim/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "regionsim/error.hpp"

namespace regionsim {

namespace {

constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Appends `segment` to `walk`; the segment must start where the walk ends.
void extend(PathResult& walk, const PathResult& segment) {
  if (walk.vertices.empty()) {
    walk = segment;
    return;
  }
  if (segment.vertices.empty() || segment.vertices.front() != walk.vertices.back()) {
    throw Error(ErrorKind::Internal, "boundary route segments do not join");
  }
  walk.vertices.insert(walk.vertices.end(), segment.vertices.begin() + 1, segment.vertices.end());
  walk.length += segment.length;
  walk.cost += segment.cost;
}

}  // namespace

RegionSeedSet::RegionSeedSet(std::vector<Vertex> seeds, std::size_t vertex_count)
    : seeds_(std::move(seeds)) {
  if (seeds_.empty()) throw Error(ErrorKind::InvalidInput, "seed set is empty");
  std::sort(seeds_.begin(), seeds_.end());
  if (std::adjacent_find(seeds_.begin(), seeds_.end()) != seeds_.end()) {
    throw Error(ErrorKind::InvalidInput, "duplicate seed");
  }
  if (seeds_.back() >= vertex_count) {
    throw Error(ErrorKind::InvalidInput, "seed " + std::to_string(seeds_.back()) +
                                             " is not a vertex of the graph");
  }
}

bool RegionSeedSet::contains(Vertex v) const {
  return std::binary_search(seeds_.begin(), seeds_.end(), v);
}

std::optional<std::size_t> RegionSeedSet::index_of(Vertex v) const {
  auto it = std::lower_bound(seeds_.begin(), seeds_.end(), v);
  if (it == seeds_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - seeds_.begin());
}

PathQuery metric_query(CellMetric metric) {
  PathQuery q;
  if (metric == CellMetric::Hops) q.cost = [](const Arc&) { return 1.0; };
  return q;
}

bool BoundaryCellMap::in_cell(Vertex u, RegionId seed) const {
  const auto& o = owners_.at(u);
  return std::binary_search(o.begin(), o.end(), seed);
}

std::span<const Vertex> BoundaryCellMap::members(RegionId seed) const {
  auto idx = seeds_.index_of(seed);
  if (!idx) throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(seed) + " is not a seed");
  return members_[*idx];
}

std::span<const Vertex> BoundaryCellMap::canonical_members(RegionId seed) const {
  auto idx = seeds_.index_of(seed);
  if (!idx) throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(seed) + " is not a seed");
  return canonical_members_[*idx];
}

BoundaryCellMap compute_boundary_cells(const Digraph& g, const RegionSeedSet& seeds,
                                       CellMetric metric) {
  for (Vertex s : seeds.seeds()) g.require(s);
  const std::size_t n = g.size();

  // τ(u, seed) for every u, one reverse search per seed.
  std::vector<Distances> to_seed;
  to_seed.reserve(seeds.size());
  for (Vertex s : seeds.seeds()) {
    if (metric == CellMetric::Hops) {
      Distances d(n);
      const auto hops = hops_to(g, s);
      for (std::size_t u = 0; u < n; ++u) {
        if (hops[u]) d[u] = static_cast<double>(*hops[u]);
      }
      to_seed.push_back(std::move(d));
    } else {
      to_seed.push_back(distances_to(g, s));
    }
  }

  BoundaryCellMap cells(seeds);
  cells.metric_ = metric;
  cells.owners_.resize(n);
  cells.canonical_.resize(n);
  cells.seed_distance_.resize(n);
  cells.members_.resize(seeds.size());
  cells.canonical_members_.resize(seeds.size());

  for (Vertex u = 0; u < n; ++u) {
    std::optional<double> best;
    for (const auto& d : to_seed) {
      if (d[u] && (!best || *d[u] < *best)) best = d[u];
    }
    if (!best) {
      throw Error(ErrorKind::InvalidInput,
                  "node " + std::to_string(g.id(u)) + " cannot reach any region seed");
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto& d = to_seed[i][u];
      if (d && (metric == CellMetric::Hops ? *d == *best : nearly_equal(*d, *best))) {
        cells.owners_[u].push_back(seeds.seeds()[i]);
        cells.members_[i].push_back(u);
      }
    }
    cells.canonical_[u] = cells.owners_[u].front();
    cells.seed_distance_[u] = *best;
    cells.canonical_members_[*seeds.index_of(cells.canonical_[u])].push_back(u);
    if (cells.owners_[u].size() > 1) cells.ties_.push_back(u);
  }
  return cells;
}

ContainmentCheck verify_cell_containment(const Digraph& g, const BoundaryCellMap& cells, Vertex u) {
  g.require(u);
  const RegionId seed = cells.cell_of(u);
  ContainmentCheck check;
  auto path = shortest_path(g, u, seed, metric_query(cells.metric()));
  if (!path) {
    throw Error(ErrorKind::Internal, "node assigned to a cell whose seed it cannot reach");
  }
  check.path = std::move(*path);
  for (Vertex w : check.path.vertices) {
    if (cells.owners(w).size() > 1) check.touches_tie = true;
    if (!cells.in_cell(w, seed) && !check.witness) {
      check.passed = false;
      check.witness = w;
    }
  }
  return check;
}

std::optional<PathResult> intra_cell_path(const Digraph& g, const BoundaryCellMap& cells,
                                          RegionId seed, Vertex from, Vertex to) {
  PathQuery q;
  q.admit = [&cells, seed](Vertex v) { return cells.cell_of(v) == seed; };
  return shortest_path(g, from, to, q);
}

Vertex BoundaryDualGraph::dual_vertex(RegionId seed) const {
  auto it = std::lower_bound(seeds_.begin(), seeds_.end(), seed);
  if (it == seeds_.end() || *it != seed) {
    throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(seed) + " is not a seed");
  }
  return static_cast<Vertex>(it - seeds_.begin());
}

const CrossingArc& BoundaryDualGraph::crossing(Vertex dual_from, Vertex dual_to) const {
  const std::pair<Vertex, Vertex> key{dual_from, dual_to};
  auto it = std::lower_bound(crossings_.begin(), crossings_.end(), key,
                             [](const auto& entry, const auto& k) { return entry.first < k; });
  if (it == crossings_.end() || it->first != key) {
    throw Error(ErrorKind::InvalidInput, "no dual arc between the given cells");
  }
  return it->second;
}

BoundaryDualGraph build_boundary_dual_graph(const Digraph& g, const BoundaryCellMap& cells) {
  if (cells.vertex_count() != g.size()) {
    throw Error(ErrorKind::InvalidInput, "cell map does not belong to this graph");
  }
  BoundaryDualGraph dual;
  const auto seeds = cells.seeds().seeds();
  dual.seeds_.assign(seeds.begin(), seeds.end());
  dual.from_seed_.assign(g.size(), std::nullopt);
  dual.to_seed_.assign(g.size(), std::nullopt);

  for (RegionId seed : seeds) {
    PathQuery q;
    q.admit = [&cells, seed](Vertex v) { return cells.cell_of(v) == seed; };
    const Distances from = distances_from(g, seed, q);
    const Distances to = distances_to(g, seed, q);
    for (Vertex v : cells.canonical_members(seed)) {
      dual.from_seed_[v] = from[v];
      dual.to_seed_[v] = to[v];
    }
  }

  // Arcs are visited in (from, to) order and only a strictly cheaper
  // candidate replaces the incumbent, so ties keep the smallest node-id pair.
  std::map<std::pair<Vertex, Vertex>, CrossingArc> best;
  for (const auto& a : g.arcs()) {
    const RegionId ca = cells.cell_of(a.from);
    const RegionId cb = cells.cell_of(a.to);
    if (ca == cb || !dual.from_seed_[a.from] || !dual.to_seed_[a.to]) continue;
    const double w = *dual.from_seed_[a.from] + a.weight + *dual.to_seed_[a.to];
    const std::pair<Vertex, Vertex> key{dual.dual_vertex(ca), dual.dual_vertex(cb)};
    auto [it, inserted] = best.try_emplace(key, CrossingArc{a.from, a.to, w});
    if (!inserted && w < it->second.weight && !nearly_equal(w, it->second.weight)) {
      it->second = CrossingArc{a.from, a.to, w};
    }
  }
  dual.crossings_.assign(best.begin(), best.end());

  std::vector<Arc> dual_arcs;
  dual_arcs.reserve(dual.crossings_.size());
  for (const auto& [key, crossing] : dual.crossings_) {
    dual_arcs.push_back(Arc{key.first, key.second, crossing.weight});
  }
  std::vector<NodeId> ids;
  std::vector<IdArc> id_arcs;
  for (RegionId s : seeds) ids.push_back(g.id(s));
  for (const auto& a : dual_arcs) id_arcs.push_back(IdArc{ids[a.from], ids[a.to], a.weight});
  dual.dual_ = Digraph::from_ids(std::move(ids), id_arcs);
  return dual;
}

std::optional<BoundaryRoute> boundary_route(const Digraph& g, const BoundaryCellMap& cells,
                                            const BoundaryDualGraph& dual, Vertex s, Vertex t) {
  auto direct = shortest_path(g, s, t);
  if (!direct) return std::nullopt;

  BoundaryRoute route;
  route.direct = std::move(*direct);
  const RegionId cs = cells.cell_of(s);
  const RegionId ct = cells.cell_of(t);
  if (cs == ct) {
    route.boundary = route.direct;
    route.cells = {cs};
    return route;
  }

  auto dual_path = shortest_path(dual.graph(), dual.dual_vertex(cs), dual.dual_vertex(ct));
  if (!dual_path) return std::nullopt;

  auto segment = [&](RegionId seed, Vertex from, Vertex to) {
    auto p = intra_cell_path(g, cells, seed, from, to);
    if (!p) throw Error(ErrorKind::Internal, "cell is not internally connected to its seed");
    return std::move(*p);
  };

  PathResult walk = segment(cs, s, cs);
  for (std::size_t i = 0; i + 1 < dual_path->vertices.size(); ++i) {
    const Vertex dv = dual_path->vertices[i];
    const Vertex dw = dual_path->vertices[i + 1];
    const CrossingArc& x = dual.crossing(dv, dw);
    const RegionId from_seed = dual.seed_of(dv);
    const RegionId to_seed = dual.seed_of(dw);
    extend(walk, segment(from_seed, from_seed, x.from));
    extend(walk, PathResult{{x.from, x.to}, *g.arc_weight(x.from, x.to),
                            *g.arc_weight(x.from, x.to)});
    extend(walk, segment(to_seed, x.to, to_seed));
    route.cells.push_back(from_seed);
  }
  route.cells.push_back(ct);
  extend(walk, segment(ct, ct, t));
  route.boundary = std::move(walk);

  if (route.direct.length > 0.0) route.ratio = route.boundary.length / route.direct.length;
  const double e = static_cast<double>(route.direct.hop_count());
  route.within_bound = route.boundary.length <= e * route.direct.length;
  return route;
}

TightnessInstance worst_case_construction(int arc_count, double m, double eps) {
  if (arc_count < 2) throw Error(ErrorKind::InvalidInput, "arc count must be at least 2");
  if (!(eps > 0.0) || !(m > eps)) throw Error(ErrorKind::InvalidInput, "requires m > eps > 0");

  // s = 0, path interior a_i = i, t = e, detour seed b_i = e + i.
  const auto e = static_cast<Vertex>(arc_count);
  std::vector<Arc> arcs;
  auto link = [&arcs](Vertex u, Vertex v, double w) {
    arcs.push_back(Arc{u, v, w});
    arcs.push_back(Arc{v, u, w});
  };
  link(0, 1, m);
  for (Vertex i = 1; i + 1 < e; ++i) link(i, i + 1, eps);
  link(e - 1, e, m);
  std::vector<Vertex> seeds{0, e};
  for (Vertex i = 1; i < e; ++i) {
    link(i, e + i, m - eps);
    seeds.push_back(e + i);
  }
  Digraph g(2 * static_cast<std::size_t>(e), arcs);
  RegionSeedSet seed_set(std::move(seeds), g.size());
  return TightnessInstance{std::move(g), std::move(seed_set), 0, e, CellMetric::Weighted};
}

}  // namespace regionsim
