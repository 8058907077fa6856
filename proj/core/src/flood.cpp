#include "regionsim/flood.hpp"

#include <algorithm>
#include <ostream>

#include "regionsim/error.hpp"

namespace regionsim {

std::string_view to_string(FloodAction action) {
  switch (action) {
    case FloodAction::Discard: return "discard";
    case FloodAction::MergeRebroadcast: return "merge";
    case FloodAction::ReplaceRebroadcast: return "replace";
  }
  return "unknown";
}

FloodTotals& FloodTotals::operator+=(const FloodTotals& other) {
  tx += other.tx;
  rx += other.rx;
  discards += other.discards;
  broadcasts += other.broadcasts;
  rounds += other.rounds;
  return *this;
}

FloodAction handle_message(FloodState& state, const FloodMessage& msg) {
  ++state.rx_count;
  if (state.distance && msg.hop > *state.distance) {
    ++state.discard_count;
    return FloodAction::Discard;
  }
  if (state.distance && msg.hop == *state.distance) {
    auto it = std::lower_bound(state.regions.begin(), state.regions.end(), msg.region);
    if (it != state.regions.end() && *it == msg.region) {
      ++state.discard_count;
      return FloodAction::Discard;
    }
    state.regions.insert(it, msg.region);
    return FloodAction::MergeRebroadcast;
  }
  state.regions.assign(1, msg.region);
  state.distance = msg.hop;
  return FloodAction::ReplaceRebroadcast;
}

FloodNetwork::FloodNetwork(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options)
    : graph_(&g), options_(options), states_(g.size()), rng_(options.seed) {
  for (Vertex s : seeds.seeds()) {
    g.require(s);
    states_[s].regions = {s};
    states_[s].distance = 0;
  }
  for (Vertex s : seeds.seeds()) broadcast(s, FloodMessage{s, 1});
  if (options_.schedule == FloodSchedule::Synchronous) pending_.swap(next_);
}

void FloodNetwork::broadcast(Vertex from, FloodMessage msg) {
  auto& sender = states_[from];
  ++sender.broadcasts;
  ++totals_.broadcasts;
  auto& queue = options_.schedule == FloodSchedule::Synchronous ? next_ : pending_;
  for (const auto& a : graph_->out_arcs(from)) {
    ++sender.tx_count;
    ++totals_.tx;
    queue.push_back(InFlight{from, a.to, msg});
  }
}

void FloodNetwork::deliver(const InFlight& m, std::uint64_t round) {
  auto& state = states_[m.receiver];
  const auto discards_before = state.discard_count;
  const FloodAction action = handle_message(state, m.msg);
  ++totals_.rx;
  totals_.discards += state.discard_count - discards_before;
  if (options_.record_trace) {
    trace_.push_back(FloodTraceRecord{round, m.sender, m.receiver, m.msg.region, m.msg.hop, action});
  }
  if (action != FloodAction::Discard) {
    broadcast(m.receiver, FloodMessage{m.msg.region, m.msg.hop + 1});
  }
}

bool FloodNetwork::step() {
  if (pending_.empty()) return false;
  const std::uint64_t round = ++totals_.rounds;
  if (options_.schedule == FloodSchedule::Synchronous) {
    std::sort(pending_.begin(), pending_.end(), [](const InFlight& a, const InFlight& b) {
      if (a.receiver != b.receiver) return a.receiver < b.receiver;
      if (a.msg.region != b.msg.region) return a.msg.region < b.msg.region;
      return a.sender < b.sender;
    });
    for (const auto& m : pending_) deliver(m, round);
    pending_.swap(next_);
    next_.clear();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, pending_.size() - 1);
    const std::size_t i = pick(rng_);
    std::swap(pending_[i], pending_.back());
    const InFlight m = pending_.back();
    pending_.pop_back();
    deliver(m, round);
  }
  return true;
}

void FloodNetwork::run_to_completion() {
  while (step()) {
  }
}

FloodResult FloodNetwork::result() const {
  FloodResult r;
  r.states = states_;
  r.totals = totals_;
  r.trace = trace_;
  for (Vertex v = 0; v < states_.size(); ++v) {
    if (!states_[v].distance) r.unreached.push_back(v);
  }
  return r;
}

FloodNetwork init_flood(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options) {
  return FloodNetwork(g, seeds, options);
}

FloodResult run_flood(const Digraph& g, const RegionSeedSet& seeds, FloodOptions options) {
  FloodNetwork net(g, seeds, options);
  net.run_to_completion();
  return net.result();
}

std::uint64_t naive_flood_count(const Digraph& g, const RegionSeedSet& seeds) {
  std::uint64_t total = 0;
  for (Vertex s : seeds.seeds()) {
    const auto reach = hops_from(g, s);
    for (Vertex v = 0; v < g.size(); ++v) {
      if (reach[v]) total += g.out_arcs(v).size();
    }
  }
  return total;
}

double message_savings(const FloodTotals& totals, const Digraph& g, const RegionSeedSet& seeds) {
  const auto naive = naive_flood_count(g, seeds);
  if (naive == 0) return 0.0;
  return 1.0 - static_cast<double>(totals.tx) / static_cast<double>(naive);
}

void write_flood_trace(std::ostream& out, const Digraph& g, std::span<const FloodTraceRecord> trace) {
  out << "round,sender,receiver,region,f_m,action\n";
  for (const auto& r : trace) {
    out << r.round << ',' << g.id(r.sender) << ',' << g.id(r.receiver) << ',' << g.id(r.region)
        << ',' << r.hop << ',' << to_string(r.action) << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing flood trace");
}

}  // namespace regionsim
