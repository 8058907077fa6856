#pragma once

// Region-based relay routing (RES) and the four comparison protocols.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regionsim/energy.hpp"
#include "regionsim/flood.hpp"
#include "regionsim/graph.hpp"
#include "regionsim/regions.hpp"

namespace regionsim {

enum class Protocol { Res, Dt, Mte, Merr, Or };

inline constexpr Protocol kAllProtocols[] = {Protocol::Res, Protocol::Dt, Protocol::Mte,
                                             Protocol::Merr, Protocol::Or};

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view tag);
/// Comma-separated tags, or "all".
std::vector<Protocol> parse_protocol_list(std::string_view tags);

/**
 * Next-hop table for every node. Lookups for a destination in another cell
 * use the per-region entry; destinations in the node's own cell have their
 * own entry. Every entry names a 1-hop out-neighbor.
 */
class RoutingTable {
 public:
  explicit RoutingTable(std::vector<RegionId> cell_of);

  std::size_t size() const { return cell_of_.size(); }
  RegionId cell_of(Vertex v) const { return cell_of_.at(v); }

  std::optional<Vertex> next_hop(Vertex node, Vertex destination) const;
  std::optional<Vertex> region_entry(Vertex node, RegionId region) const;
  std::optional<Vertex> destination_entry(Vertex node, Vertex destination) const;

  void set_region_entry(Vertex node, RegionId region, Vertex next);
  void set_destination_entry(Vertex node, Vertex destination, Vertex next);

  std::size_t entry_count() const;

 private:
  using Entries = std::vector<std::pair<Vertex, Vertex>>;  // sorted (key, next)
  static std::optional<Vertex> lookup(const Entries& e, Vertex key);
  static void upsert(Entries& e, Vertex key, Vertex next);

  std::vector<RegionId> cell_of_;
  std::vector<Entries> region_entries_;
  std::vector<Entries> destination_entries_;
};

struct ResTables {
  RoutingTable table;
  std::vector<Vertex> stranded;  // not reached by the flood; no entries
};

/// Intra-cell entries follow shortest paths inside the cell; a node leaves
/// its cell only through the crossing arc the dual-graph route selects.
ResTables build_res_tables(const Digraph& g, const BoundaryCellMap& cells,
                           const BoundaryDualGraph& dual, const FloodResult& flood);

struct SessionRoute {
  Protocol protocol = Protocol::Res;
  Vertex source = 0;
  Vertex sink = 0;
  std::vector<Vertex> vertices;
  std::vector<std::size_t> levels;  // power level per hop
  double energy_per_packet = 0.0;   // Σ (tx at level + rx), joules

  std::size_t hop_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// Follows next_hop entries from source; throws Error(Internal) after
/// max_hops steps (a cycle) and Error(Unreachable) on a missing entry.
std::vector<Vertex> walk_table(const RoutingTable& table, Vertex source, Vertex sink,
                               std::size_t max_hops);

/// Hop length minimizing (tx + rx energy) per meter across the power levels.
double merr_characteristic_distance(const EnergyParams& params, double max_range);

/// Shared inputs for every protocol. `nodes` is indexed by vertex.
struct RouteContext {
  const Digraph* graph = nullptr;
  std::span<const NodePos> nodes;
  EnergyParams energy;
  std::uint64_t packet_bits = 1024;
  const RoutingTable* res_table = nullptr;
  std::optional<double> merr_distance;  // computed from `energy` when empty
};

/// Throws Error(Unreachable) naming the protocol when no route exists.
SessionRoute route(Protocol protocol, const RouteContext& ctx, Vertex source, Vertex sink);

/// Fills levels and per-packet energy for an explicit vertex sequence.
SessionRoute price_route(Protocol protocol, const RouteContext& ctx, std::vector<Vertex> vertices);

}  // namespace regionsim
