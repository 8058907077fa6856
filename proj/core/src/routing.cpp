#include "regionsim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "regionsim/error.hpp"

namespace regionsim {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Res: return "res";
    case Protocol::Dt: return "dt";
    case Protocol::Mte: return "mte";
    case Protocol::Merr: return "merr";
    case Protocol::Or: return "or";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view tag) {
  for (Protocol p : kAllProtocols) {
    if (tag == to_string(p)) return p;
  }
  throw Error(ErrorKind::InvalidInput, "unknown protocol '" + std::string(tag) + "'");
}

std::vector<Protocol> parse_protocol_list(std::string_view tags) {
  if (tags == "all") return {std::begin(kAllProtocols), std::end(kAllProtocols)};
  std::vector<Protocol> out;
  while (!tags.empty()) {
    const auto comma = tags.find(',');
    const auto tag = tags.substr(0, comma);
    if (!tag.empty()) {
      const Protocol p = parse_protocol(tag);
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    if (comma == std::string_view::npos) break;
    tags.remove_prefix(comma + 1);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "no protocols given");
  return out;
}

RoutingTable::RoutingTable(std::vector<RegionId> cell_of)
    : cell_of_(std::move(cell_of)),
      region_entries_(cell_of_.size()),
      destination_entries_(cell_of_.size()) {}

std::optional<Vertex> RoutingTable::lookup(const Entries& e, Vertex key) {
  auto it = std::lower_bound(e.begin(), e.end(), key,
                             [](const auto& entry, Vertex k) { return entry.first < k; });
  if (it == e.end() || it->first != key) return std::nullopt;
  return it->second;
}

void RoutingTable::upsert(Entries& e, Vertex key, Vertex next) {
  auto it = std::lower_bound(e.begin(), e.end(), key,
                             [](const auto& entry, Vertex k) { return entry.first < k; });
  if (it != e.end() && it->first == key) {
    it->second = next;
  } else {
    e.insert(it, {key, next});
  }
}

std::optional<Vertex> RoutingTable::next_hop(Vertex node, Vertex destination) const {
  const RegionId target_cell = cell_of_.at(destination);
  if (cell_of_.at(node) == target_cell) return destination_entry(node, destination);
  return region_entry(node, target_cell);
}

std::optional<Vertex> RoutingTable::region_entry(Vertex node, RegionId region) const {
  return lookup(region_entries_.at(node), region);
}

std::optional<Vertex> RoutingTable::destination_entry(Vertex node, Vertex destination) const {
  return lookup(destination_entries_.at(node), destination);
}

void RoutingTable::set_region_entry(Vertex node, RegionId region, Vertex next) {
  upsert(region_entries_.at(node), region, next);
}

void RoutingTable::set_destination_entry(Vertex node, Vertex destination, Vertex next) {
  upsert(destination_entries_.at(node), destination, next);
}

std::size_t RoutingTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& e : region_entries_) n += e.size();
  for (const auto& e : destination_entries_) n += e.size();
  return n;
}

namespace {

constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// First hop of the lexicographically smallest shortest path from every
// admitted vertex to `target`; the same rule shortest_path() applies.
std::vector<std::optional<Vertex>> next_hops_toward(const Digraph& g, Vertex target,
                                                    const PathQuery& query) {
  const Distances dist = distances_to(g, target, query);
  std::vector<std::optional<Vertex>> next(g.size());
  for (Vertex u = 0; u < g.size(); ++u) {
    if (u == target || !dist[u]) continue;
    for (const auto& a : g.out_arcs(u)) {
      if (!dist[a.to] || (query.admit && !query.admit(a.to))) continue;
      const double c = query.cost ? query.cost(a) : a.weight;
      if (*dist[a.to] < *dist[u] && nearly_equal(c + *dist[a.to], *dist[u])) {
        next[u] = a.to;
        break;
      }
    }
  }
  return next;
}

}  // namespace

ResTables build_res_tables(const Digraph& g, const BoundaryCellMap& cells,
                           const BoundaryDualGraph& dual, const FloodResult& flood) {
  if (flood.states.size() != g.size() || cells.vertex_count() != g.size()) {
    throw Error(ErrorKind::InvalidInput, "flood result and cell map must cover the graph");
  }
  std::vector<RegionId> cell_of(g.size());
  for (Vertex v = 0; v < g.size(); ++v) cell_of[v] = cells.cell_of(v);
  ResTables out{RoutingTable(std::move(cell_of)), flood.unreached};

  std::vector<bool> stranded(g.size(), false);
  for (Vertex v : flood.unreached) stranded[v] = true;

  const auto seeds = cells.seeds().seeds();
  for (RegionId seed : seeds) {
    PathQuery in_cell;
    in_cell.admit = [&cells, &stranded, seed](Vertex v) {
      return cells.cell_of(v) == seed && !stranded[v];
    };
    std::vector<Vertex> members;
    for (Vertex v : cells.canonical_members(seed)) {
      if (!stranded[v]) members.push_back(v);
    }

    // Destinations inside the cell.
    for (Vertex dest : members) {
      const auto next = next_hops_toward(g, dest, in_cell);
      for (Vertex u : members) {
        if (next[u]) out.table.set_destination_entry(u, dest, *next[u]);
      }
    }

    // Other regions: leave through the crossing arc of the first dual hop.
    const Vertex from_dual = dual.dual_vertex(seed);
    std::map<Vertex, std::vector<std::optional<Vertex>>> toward_exit;
    for (RegionId other : seeds) {
      if (other == seed) continue;
      auto dual_path = shortest_path(dual.graph(), from_dual, dual.dual_vertex(other));
      if (!dual_path) continue;
      const CrossingArc& exit = dual.crossing(dual_path->vertices[0], dual_path->vertices[1]);
      if (stranded[exit.from] || stranded[exit.to]) continue;
      auto it = toward_exit.find(exit.from);
      if (it == toward_exit.end()) {
        it = toward_exit.emplace(exit.from, next_hops_toward(g, exit.from, in_cell)).first;
      }
      for (Vertex u : members) {
        if (u == exit.from) {
          out.table.set_region_entry(u, other, exit.to);
        } else if (it->second[u]) {
          out.table.set_region_entry(u, other, *it->second[u]);
        }
      }
    }
  }
  return out;
}

std::vector<Vertex> walk_table(const RoutingTable& table, Vertex source, Vertex sink,
                               std::size_t max_hops) {
  std::vector<Vertex> path{source};
  Vertex u = source;
  while (u != sink) {
    if (path.size() > max_hops) {
      throw Error(ErrorKind::Internal, "routing table cycle detected after " +
                                           std::to_string(max_hops) + " hops");
    }
    auto next = table.next_hop(u, sink);
    if (!next) {
      throw Error(ErrorKind::Unreachable, "res: no table entry at vertex " + std::to_string(u));
    }
    u = *next;
    path.push_back(u);
  }
  return path;
}

double merr_characteristic_distance(const EnergyParams& params, double max_range) {
  double best_per_meter = std::numeric_limits<double>::infinity();
  double best_range = max_range;
  for (std::size_t level = 0; level < kPowerLevels; ++level) {
    const double range = level_range(level, max_range, params);
    const double per_meter = (radio_draw_w(level, params) + params.p_rx_w) / range;
    if (per_meter < best_per_meter) {
      best_per_meter = per_meter;
      best_range = range;
    }
  }
  return best_range;
}

namespace {

Error unreachable(Protocol p, const std::string& why) {
  return Error(ErrorKind::Unreachable, std::string(to_string(p)) + ": " + why);
}

double hop_distance_m(const RouteContext& ctx, Vertex u, Vertex v) {
  return euclidean_distance(ctx.nodes[u], ctx.nodes[v]);
}

std::vector<Vertex> merr_path(const RouteContext& ctx, Vertex source, Vertex sink, double d_char) {
  const Digraph& g = *ctx.graph;
  std::vector<Vertex> path{source};
  Vertex u = source;
  while (u != sink) {
    if (g.has_arc(u, sink)) {
      path.push_back(sink);
      break;
    }
    const double here = hop_distance_m(ctx, u, sink);
    std::optional<Vertex> pick;
    double pick_gap = 0.0;
    for (const auto& a : g.out_arcs(u)) {
      if (hop_distance_m(ctx, a.to, sink) >= here) continue;
      const double gap = std::abs(hop_distance_m(ctx, u, a.to) - d_char);
      if (!pick || gap < pick_gap) {
        pick = a.to;
        pick_gap = gap;
      }
    }
    if (!pick) throw unreachable(Protocol::Merr, "no neighbor makes progress toward the sink");
    u = *pick;
    path.push_back(u);
  }
  return path;
}

}  // namespace

SessionRoute price_route(Protocol protocol, const RouteContext& ctx, std::vector<Vertex> vertices) {
  SessionRoute r;
  r.protocol = protocol;
  r.source = vertices.front();
  r.sink = vertices.back();
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const Vertex u = vertices[i - 1];
    const Vertex v = vertices[i];
    if (protocol != Protocol::Dt && !ctx.graph->has_arc(u, v)) {
      throw Error(ErrorKind::Internal, std::string(to_string(protocol)) + " route uses a missing arc");
    }
    const double d = hop_distance_m(ctx, u, v);
    auto level = min_level_for_distance(d, ctx.nodes[u].radio_range, ctx.energy);
    if (!level) throw unreachable(protocol, "hop exceeds radio range");
    r.levels.push_back(*level);
    r.energy_per_packet +=
        tx_energy(ctx.packet_bits, *level, ctx.energy) + rx_energy(ctx.packet_bits, ctx.energy);
  }
  r.vertices = std::move(vertices);
  return r;
}

SessionRoute route(Protocol protocol, const RouteContext& ctx, Vertex source, Vertex sink) {
  if (ctx.graph == nullptr || ctx.nodes.size() != ctx.graph->size()) {
    throw Error(ErrorKind::InvalidInput, "route context needs a graph and one position per vertex");
  }
  const Digraph& g = *ctx.graph;
  g.require(source);
  g.require(sink);
  if (source == sink) throw Error(ErrorKind::InvalidInput, "source and sink must differ");

  switch (protocol) {
    case Protocol::Res: {
      if (ctx.res_table == nullptr) throw Error(ErrorKind::InvalidInput, "res: tables not built");
      return price_route(protocol, ctx, walk_table(*ctx.res_table, source, sink, g.size()));
    }
    case Protocol::Dt: {
      if (hop_distance_m(ctx, source, sink) > ctx.nodes[source].radio_range) {
        throw unreachable(protocol, "sink beyond the top power level's range");
      }
      return price_route(protocol, ctx, {source, sink});
    }
    case Protocol::Mte: {
      PathQuery q;
      q.cost = [&ctx](const Arc& a) {
        return std::pow(hop_distance_m(ctx, a.from, a.to), ctx.energy.path_loss_exponent);
      };
      auto p = shortest_path(g, source, sink, q);
      if (!p) throw unreachable(protocol, "no path to sink");
      return price_route(protocol, ctx, std::move(p->vertices));
    }
    case Protocol::Merr: {
      const double d_char =
          ctx.merr_distance ? *ctx.merr_distance
                            : merr_characteristic_distance(ctx.energy, ctx.nodes[source].radio_range);
      return price_route(protocol, ctx, merr_path(ctx, source, sink, d_char));
    }
    case Protocol::Or: {
      PathQuery q;
      q.cost = [&ctx](const Arc& a) {
        return hop_energy(ctx.packet_bits, hop_distance_m(ctx, a.from, a.to),
                          ctx.nodes[a.from].radio_range, ctx.energy);
      };
      auto p = shortest_path(g, source, sink, q);
      if (!p) throw unreachable(protocol, "no path to sink");
      return price_route(protocol, ctx, std::move(p->vertices));
    }
  }
  throw Error(ErrorKind::Internal, "unhandled protocol");
}

}  // namespace regionsim
