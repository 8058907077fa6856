#pragma once

// Discrete-event harness: deployment, session traffic, duty cycling, node
// death and interval reporting.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regionsim/energy.hpp"
#include "regionsim/flood.hpp"
#include "regionsim/graph.hpp"
#include "regionsim/routing.hpp"
#include "regionsim/scenario.hpp"

namespace regionsim {

/// Sensors carry ids 0..N-1. Regions are numbered row-major from the origin.
struct Deployment {
  std::vector<NodePos> nodes;
  std::vector<NodeId> boundary;  // boundary node per region
};

/// Node i goes to region i mod R at a uniform position inside it. The
/// boundary node of a region is its member nearest the region center.
Deployment deploy(const ScenarioConfig& config, std::uint64_t seed);

/// Equal-time events run in this order, then by node id, then by schedule order.
enum class EventKind : std::uint8_t { NodeDeath, Setup, Wake, Sleep, Rx, Tx, PacketGen, Report };

std::string_view to_string(EventKind kind);

struct IntervalReport {
  double time_s = 0.0;
  double coverage_pct = 0.0;
  std::array<double, kEnergyModes> energy_j{};  // cumulative, by EnergyMode
  double total_energy_j = 0.0;
  std::uint32_t alive = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
};

struct LedgerRow {
  double time_s = 0.0;
  NodeId node = 0;
  std::array<double, kEnergyModes> spent_j{};
  double remaining_j = 0.0;
};

struct SessionReport {
  std::uint32_t index = 0;
  NodeId source = 0;
  std::optional<std::size_t> setup_hops;       // route at the first setup
  std::optional<double> setup_energy_per_packet_j;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  double energy_j = 0.0;  // radio energy spent on this session's packets
};

struct RunReport {
  Protocol protocol = Protocol::Res;
  std::uint64_t seed = 0;
  std::uint32_t node_count = 0;
  double duration_s = 0.0;

  std::vector<IntervalReport> intervals;
  std::vector<SessionReport> sessions;
  std::vector<LedgerRow> ledger_rows;

  FloodTotals flood;  // summed over every setup
  std::uint32_t setups = 0;
  std::vector<FloodTraceRecord> flood_trace;  // first setup only, node ids
  double merr_distance_m = 0.0;

  std::array<double, kEnergyModes> energy_j{};
  double total_energy_j = 0.0;  // sum over node ledgers
  double conservation_error_j = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  double delivery_ratio = 0.0;
  std::uint32_t deaths = 0;
  double lifetime_s = 0.0;            // first death, or the run length
  double mean_node_energy_j = 0.0;    // S_i

  std::uint64_t event_count = 0;
  std::uint64_t digest = 0;  // hash of the processed event sequence
};

struct RunOptions {
  std::optional<Deployment> deployment;      // replaces deploy(config, seed)
  std::optional<std::vector<NodeId>> sources;  // replaces the random session sources
  bool record_flood_trace = false;
  bool record_ledger = true;
};

/// Errors raised inside the event loop are rethrown with the seed and timestamp.
RunReport run(const ScenarioConfig& config, std::uint64_t seed, Protocol protocol,
              const RunOptions& options = {});

struct MetricStat {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct BatchReport {
  Protocol protocol = Protocol::Res;
  std::uint64_t base_seed = 0;
  std::vector<RunReport> runs;  // seeds base_seed + i, in order
  std::vector<MetricStat> metrics;

  const MetricStat& metric(std::string_view name) const;
};

/// Runs seeds config.seed + 0 .. config.seed + run_count - 1 on up to
/// `threads` workers (0 = hardware concurrency).
BatchReport run_batch(const ScenarioConfig& config, Protocol protocol, unsigned threads = 0,
                      const RunOptions& options = {});

std::vector<MetricStat> summarize(std::span<const RunReport> runs);

std::vector<std::pair<double, double>> coverage_series(const RunReport& report);

/// Percent of config.coverage_samples seeded uniform points in the area that
/// lie within sensing range of at least one listed node.
double coverage_percent(std::span<const NodePos> nodes, const ScenarioConfig& config,
                         std::uint64_t seed);

}  // namespace regionsim
