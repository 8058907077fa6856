#pragma once

// Distributed region flooding: every seed floods (region, hop) messages and
// each node keeps only the regions at the smallest hop value it has seen.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "regionsim/graph.hpp"
#include "regionsim/regions.hpp"

namespace regionsim {

struct FloodMessage {
  RegionId region = 0;
  std::uint32_t hop = 1;  // f_m; seeds emit 1
};

/// Per-node label (R_v, D_v) plus message tallies. A fresh state is (∅, ∞).
struct FloodState {
  std::vector<RegionId> regions;         // sorted
  std::optional<std::uint32_t> distance;
  std::uint64_t tx_count = 0;            // unicast deliveries sent
  std::uint64_t rx_count = 0;
  std::uint64_t discard_count = 0;
  std::uint64_t broadcasts = 0;          // rebroadcast decisions (one radio transmission each)
};

enum class FloodAction { Discard, MergeRebroadcast, ReplaceRebroadcast };

std::string_view to_string(FloodAction action);

/**
 * Applies the three reception rules to one node:
 *   hop >  D_v               -> Discard
 *   hop == D_v, region known -> Discard
 *   hop == D_v, region new   -> add region, rebroadcast (MergeRebroadcast)
 *   hop <  D_v               -> R_v = {region}, D_v = hop, rebroadcast (ReplaceRebroadcast)
 * Updates rx_count and discard_count; the caller performs the rebroadcast.
 */
FloodAction handle_message(FloodState& state, const FloodMessage& msg);

enum class FloodSchedule {
  Synchronous,   // all hop-h messages are delivered before any hop-(h+1) message
  Asynchronous,  // pending messages are delivered in seeded random order
};

struct FloodOptions {
  FloodSchedule schedule = FloodSchedule::Synchronous;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

struct FloodTraceRecord {
  std::uint64_t round = 0;  // delivery round (synchronous) or delivery index (asynchronous)
  Vertex sender = 0;
  Vertex receiver = 0;
  RegionId region = 0;
  std::uint32_t hop = 0;
  FloodAction action = FloodAction::Discard;
};

struct FloodTotals {
  std::uint64_t tx = 0;
  std::uint64_t rx = 0;
  std::uint64_t discards = 0;
  std::uint64_t broadcasts = 0;
  std::uint64_t rounds = 0;

  FloodTotals& operator+=(const FloodTotals& other);
};

struct FloodResult {
  std::vector<FloodState> states;
  FloodTotals totals;
  std::vector<Vertex> unreached;  // nodes still at (∅, ∞)
  std::vector<FloodTraceRecord> trace;
};

/// A network of flood states with messages in flight.
class FloodNetwork {
 public:
  FloodNetwork(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options = {});

  /// Delivers one round (synchronous) or one message (asynchronous).
  /// Returns false once nothing is pending.
  bool step();
  void run_to_completion();

  bool idle() const { return pending_.empty(); }
  std::size_t pending() const { return pending_.size(); }
  const std::vector<FloodState>& states() const { return states_; }
  const FloodTotals& totals() const { return totals_; }

  FloodResult result() const;

 private:
  struct InFlight {
    Vertex sender;
    Vertex receiver;
    FloodMessage msg;
  };

  void broadcast(Vertex from, FloodMessage msg);
  void deliver(const InFlight& m, std::uint64_t round);

  const Digraph* graph_;
  FloodOptions options_;
  std::vector<FloodState> states_;
  std::vector<InFlight> pending_;
  std::vector<InFlight> next_;
  FloodTotals totals_;
  std::vector<FloodTraceRecord> trace_;
  std::mt19937_64 rng_;
};

/// Seeds take (R_v = {self}, D_v = 0) and broadcast (self, 1) simultaneously.
FloodNetwork init_flood(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options = {});

FloodResult run_flood(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options = {});

/// Messages sent by independent per-seed flooding in which every node
/// rebroadcasts once per seed, on first reception.
std::uint64_t naive_flood_count(const Digraph& g, const RegionSeedSet& seeds);

/// 1 - tx / naive; 0 when the naive scheme sends nothing.
double message_savings(const FloodTotals& totals, const Digraph& g, const RegionSeedSet& seeds);

/// CSV with header round,sender,receiver,region,f_m,action (node ids, not vertices).
void write_flood_trace(std::ostream& out, const Digraph& g, std::span<const FloodTraceRecord> trace);

}  // namespace regionsim
