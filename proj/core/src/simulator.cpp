#include "regionsim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "regionsim/error.hpp"
#include "regionsim/regions.hpp"

namespace regionsim {

namespace {

// Independent random streams derived from one run seed.
enum class Stream : std::uint64_t { Deploy = 1, Sessions = 2, Coverage = 3, Perturb = 4 };

std::uint64_t derive(std::uint64_t seed, Stream stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(stream) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double kDeadThreshold = 1e-9;

struct Point {
  double x;
  double y;
};

std::vector<Point> sample_points(const ScenarioConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(derive(seed, Stream::Coverage));
  std::uniform_real_distribution<double> ux(0.0, config.area_width_m);
  std::uniform_real_distribution<double> uy(0.0, config.area_height_m);
  std::vector<Point> pts(config.coverage_samples);
  for (auto& p : pts) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  return pts;
}

bool covers(const NodePos& n, const Point& p, double range) {
  const double dx = n.x - p.x;
  const double dy = n.y - p.y;
  return dx * dx + dy * dy <= range * range;
}

Point region_center(const ScenarioConfig& config, std::uint32_t region) {
  const std::uint32_t rx = config.regions_x();
  return {(static_cast<double>(region % rx) + 0.5) * config.region_size_m,
          (static_cast<double>(region / rx) + 0.5) * config.region_size_m};
}

double distance_to(const NodePos& n, const Point& p) { return std::hypot(n.x - p.x, n.y - p.y); }

void fnv(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
}

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Report;
  std::uint32_t node = 0;
  std::uint64_t seq = 0;
  std::uint32_t session = 0;
  std::size_t route = 0;
  std::uint32_t hop = 0;
  std::uint64_t count = 0;  // packet index within the session
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.kind, a.node, a.seq) > std::tie(b.time, b.kind, b.node, b.seq);
  }
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& config, std::uint64_t seed, Protocol protocol,
             const RunOptions& options)
      : cfg_(config),
        seed_(seed),
        protocol_(protocol),
        options_(options),
        dep_(options.deployment ? *options.deployment : deploy(config, seed)),
        n_(static_cast<std::uint32_t>(dep_.nodes.size())),
        sink_(n_),
        ledger_(n_, config.energy, DutyMode::Sleep),
        alive_(n_, true),
        alarm_at_(n_) {
    if (dep_.boundary.size() != cfg_.region_count()) {
      throw Error(ErrorKind::InvalidInput, "deployment must name one boundary node per region");
    }
    all_ = dep_.nodes;
    for (NodeId i = 0; i < n_; ++i) {
      if (all_[i].id != i) throw Error(ErrorKind::InvalidInput, "deployment ids must be 0..N-1 in order");
      if (!all_[i].region_id || *all_[i].region_id < 0 ||
          static_cast<std::uint32_t>(*all_[i].region_id) >= cfg_.region_count()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("node {} has no valid region", i));
      }
    }
    NodePos sink;
    sink.id = sink_;
    sink.x = cfg_.sink_x_m;
    sink.y = cfg_.sink_y_m;
    sink.radio_range = cfg_.radio_range_m;
    all_.push_back(sink);

    full_ = build_unit_disk_digraph(all_, true, cfg_.weight_mode);
    if (cfg_.tie_epsilon > 0.0) {
      full_ = perturb_weights(full_, derive(seed_, Stream::Perturb), cfg_.tie_epsilon);
    }

    const auto pts = sample_points(cfg_, seed_);
    cover_.resize(pts.size());
    for (std::size_t p = 0; p < pts.size(); ++p) {
      for (NodeId i = 0; i < n_; ++i) {
        if (covers(all_[i], pts[p], cfg_.sensing_range_m)) cover_[p].push_back(i);
      }
    }

    merr_distance_ = merr_characteristic_distance(cfg_.energy, cfg_.radio_range_m);
    report_.protocol = protocol_;
    report_.seed = seed_;
    report_.node_count = n_;
    report_.duration_s = cfg_.duration_s;
    report_.merr_distance_m = merr_distance_;
    report_.lifetime_s = cfg_.duration_s;
  }

  RunReport execute() {
    schedule_initial();
    double now = 0.0;
    while (true) {
      const bool have_alarm = !alarms_.empty();
      const bool have_event = !queue_.empty();
      if (!have_alarm && !have_event) break;
      const bool take_alarm = have_alarm && (!have_event || alarms_.begin()->first <= queue_.top().time);
      const double t = take_alarm ? alarms_.begin()->first : queue_.top().time;
      if (t > cfg_.duration_s) break;
      if (t < now) throw Error(ErrorKind::Internal, "event scheduled in the past");
      now = t;
      try {
        if (take_alarm) {
          const std::uint32_t node = alarms_.begin()->second;
          on_alarm(node, t);
        } else {
          const Event e = queue_.top();
          queue_.pop();
          record(e);
          dispatch(e);
        }
      } catch (const Error& err) {
        throw Error(err.kind(), fmt::format("seed {} at t={} s: {}", seed_, t, err.what()));
      }
    }
    finish();
    return std::move(report_);
  }

 private:
  struct Session {
    NodeId source = 0;
    std::optional<std::size_t> route;
    SessionReport rep;
  };

  void push(Event e) {
    e.seq = seq_++;
    queue_.push(e);
  }

  void record(const Event& e) {
    ++report_.event_count;
    fnv(digest_, std::bit_cast<std::uint64_t>(e.time));
    fnv(digest_, static_cast<std::uint64_t>(e.kind));
    fnv(digest_, e.node);
    fnv(digest_, e.session);
    fnv(digest_, e.hop);
  }

  void schedule_initial() {
    // Init phase: only sensors that reach the sink directly stay active.
    for (const Arc& a : full_.in_arcs(full_.vertex(sink_))) {
      push(Event{0.0, EventKind::Wake, a.from});
    }
    push(Event{cfg_.init_phase_s, EventKind::Setup, 0});

    for (std::uint64_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * cfg_.report_interval_s;
      if (t >= cfg_.duration_s - 1e-9) break;
      push(Event{t, EventKind::Report, 0});
    }
    push(Event{cfg_.duration_s, EventKind::Report, 0});

    std::vector<NodeId> sources;
    if (options_.sources) {
      sources = *options_.sources;
      for (NodeId s : sources) {
        if (s >= n_) throw Error(ErrorKind::InvalidInput, fmt::format("session source {} is not a sensor", s));
      }
    } else {
      std::vector<NodeId> pool(n_);
      std::iota(pool.begin(), pool.end(), 0);
      std::mt19937_64 rng(derive(seed_, Stream::Sessions));
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(std::min<std::size_t>(cfg_.sessions, pool.size()));
      sources = std::move(pool);
    }
    for (std::uint32_t k = 0; k < sources.size(); ++k) {
      Session s;
      s.source = sources[k];
      s.rep.index = k;
      s.rep.source = sources[k];
      sessions_.push_back(s);
      push(Event{cfg_.init_phase_s, EventKind::PacketGen, sources[k], 0, k});
    }
  }

  void dispatch(const Event& e) {
    switch (e.kind) {
      case EventKind::NodeDeath: break;  // deaths come from the alarm set
      case EventKind::Setup: setup(e.time); break;
      case EventKind::Wake: set_mode(e.node, DutyMode::Sense, e.time); break;
      case EventKind::Sleep: set_mode(e.node, DutyMode::Sleep, e.time); break;
      case EventKind::Rx: on_rx(e); break;
      case EventKind::Tx: on_tx(e); break;
      case EventKind::PacketGen: on_packet(e); break;
      case EventKind::Report: on_report(e.time); break;
    }
  }

  void refresh_alarm(std::uint32_t node, double now) {
    if (alarm_at_[node]) {
      alarms_.erase({*alarm_at_[node], node});
      alarm_at_[node].reset();
    }
    if (!ledger_.alive(node)) return;
    const double at = std::max(now, *ledger_.depletion_time(node));
    alarms_.insert({at, node});
    alarm_at_[node] = at;
  }

  void charge(std::uint32_t node, EnergyMode mode, double joules, double now) {
    ledger_.accrue_to(node, now);
    ledger_.charge(node, mode, joules);
    refresh_alarm(node, now);
  }

  void set_mode(std::uint32_t node, DutyMode mode, double now) {
    if (!alive_[node]) return;
    ledger_.switch_mode(node, mode, now);
    refresh_alarm(node, now);
  }

  void on_alarm(std::uint32_t node, double now) {
    alarms_.erase(alarms_.begin());
    alarm_at_[node].reset();
    ledger_.accrue_to(node, now);
    if (ledger_.remaining(node) > kDeadThreshold) {
      refresh_alarm(node, now);
      return;
    }
    record(Event{now, EventKind::NodeDeath, node});
    ledger_.mark_dead(node, now);
    alive_[node] = false;
    if (report_.deaths++ == 0) report_.lifetime_s = now;
    if (ready_ && !setup_pending_) {
      push(Event{now, EventKind::Setup, 0});
      setup_pending_ = true;
    }
  }

  std::optional<Vertex> elect(const Digraph& topo, std::uint32_t region) const {
    const Point c = region_center(cfg_, region);
    std::optional<Vertex> best;
    double best_d = 0.0;
    for (Vertex v = 0; v < topo.size(); ++v) {
      const NodeId id = topo.id(v);
      if (id == sink_ || *all_[id].region_id != static_cast<int>(region)) continue;
      const double d = distance_to(all_[id], c);
      if (!best || d < best_d) {
        best = v;
        best_d = d;
      }
    }
    return best;
  }

  void setup(double now) {
    setup_pending_ = false;
    ready_ = true;
    ++report_.setups;

    // Alive sensors that can exchange packets with the sink.
    std::vector<Vertex> keep;
    for (NodeId i = 0; i < n_; ++i) {
      if (alive_[i]) keep.push_back(i);
    }
    keep.push_back(sink_);
    const Digraph reachable = full_.induced(keep);
    const Vertex s1 = reachable.vertex(sink_);
    const auto fwd = hops_from(reachable, s1);
    const auto back = hops_to(reachable, s1);
    std::vector<Vertex> component;
    for (Vertex v = 0; v < reachable.size(); ++v) {
      if (fwd[v] && back[v]) component.push_back(v);
    }
    const Digraph topo = reachable.induced(component);
    std::vector<NodePos> topo_nodes;
    topo_nodes.reserve(topo.size());
    for (Vertex v = 0; v < topo.size(); ++v) topo_nodes.push_back(all_[topo.id(v)]);
    const Vertex sink_v = topo.vertex(sink_);

    // A dead or cut-off boundary node is replaced by the member nearest the region center.
    std::vector<Vertex> seed_vertices;
    for (std::uint32_t r = 0; r < dep_.boundary.size(); ++r) {
      std::optional<Vertex> seed = topo.find(dep_.boundary[r]);
      if (!seed || !alive_[dep_.boundary[r]]) {
        seed = elect(topo, r);
        if (!seed) continue;
        all_[dep_.boundary[r]].is_boundary_node = false;
        dep_.boundary[r] = topo.id(*seed);
        all_[dep_.boundary[r]].is_boundary_node = true;
      }
      seed_vertices.push_back(*seed);
    }

    std::optional<ResTables> tables;
    if (protocol_ == Protocol::Res && !seed_vertices.empty()) {
      RegionSeedSet seeds(seed_vertices, topo.size());
      FloodOptions fo;
      fo.record_trace = options_.record_flood_trace && report_.setups == 1;
      FloodResult flood = run_flood(topo, seeds, fo);
      report_.flood += flood.totals;
      const auto& e = cfg_.energy;
      const double tx_each = tx_energy(cfg_.control_bits, kPowerLevels - 1, e);
      const double rx_each = rx_energy(cfg_.control_bits, e);
      for (Vertex v = 0; v < topo.size(); ++v) {
        const NodeId id = topo.id(v);
        if (id == sink_) continue;
        const FloodState& st = flood.states[v];
        if (st.broadcasts > 0) charge(id, EnergyMode::Tx, static_cast<double>(st.broadcasts) * tx_each, now);
        if (st.rx_count > 0) charge(id, EnergyMode::Rx, static_cast<double>(st.rx_count) * rx_each, now);
      }
      for (FloodTraceRecord rec : flood.trace) {
        rec.sender = topo.id(rec.sender);
        rec.receiver = topo.id(rec.receiver);
        rec.region = topo.id(rec.region);
        report_.flood_trace.push_back(rec);
      }
      const BoundaryCellMap cells = compute_boundary_cells(topo, seeds, cfg_.cell_metric);
      const BoundaryDualGraph dual = build_boundary_dual_graph(topo, cells);
      tables = build_res_tables(topo, cells, dual, flood);
    }

    RouteContext ctx;
    ctx.graph = &topo;
    ctx.nodes = topo_nodes;
    ctx.energy = cfg_.energy;
    ctx.packet_bits = cfg_.packet_bits;
    ctx.res_table = tables ? &tables->table : nullptr;
    ctx.merr_distance = merr_distance_;

    std::vector<bool> on_route(n_, false);
    for (Session& s : sessions_) {
      s.route.reset();
      const auto src = topo.find(s.source);
      if (!src || !alive_[s.source]) continue;
      if (protocol_ == Protocol::Res && !tables) continue;
      try {
        SessionRoute r = route(protocol_, ctx, *src, sink_v);
        for (Vertex& v : r.vertices) v = topo.id(v);
        r.source = r.vertices.front();
        r.sink = r.vertices.back();
        for (Vertex v : r.vertices) {
          if (v != sink_) on_route[v] = true;
        }
        if (report_.setups == 1) {
          s.rep.setup_hops = r.hop_count();
          s.rep.setup_energy_per_packet_j = r.energy_per_packet;
        }
        routes_.push_back(std::move(r));
        s.route = routes_.size() - 1;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::Unreachable) throw;
      }
    }

    for (NodeId i = 0; i < n_; ++i) {
      if (!alive_[i]) continue;
      // RES keeps only relays awake; comparators follow the configured baseline.
      const bool sense = on_route[i] || (protocol_ != Protocol::Res && cfg_.baseline_duty == BaselineDuty::AlwaysOn);
      const DutyMode want = sense ? DutyMode::Sense : DutyMode::Sleep;
      if (ledger_.mode(i) != want) {
        push(Event{now, sense ? EventKind::Wake : EventKind::Sleep, i});
      }
    }
  }

  void on_packet(const Event& e) {
    Session& s = sessions_[e.session];
    ++s.rep.generated;
    ++report_.generated;
    const double next = cfg_.init_phase_s + static_cast<double>(e.count + 1) / cfg_.packet_rate_hz;
    if (next < cfg_.duration_s) {
      Event n{next, EventKind::PacketGen, s.source, 0, e.session};
      n.count = e.count + 1;
      push(n);
    }
    if (!s.route || !alive_[s.source]) {
      ++s.rep.dropped;
      return;
    }
    Event tx{e.time, EventKind::Tx, s.source, 0, e.session};
    tx.route = *s.route;
    tx.hop = 0;
    push(tx);
  }

  void on_tx(const Event& e) {
    Session& s = sessions_[e.session];
    if (!alive_[e.node]) {
      ++s.rep.dropped;
      return;
    }
    const SessionRoute& r = routes_[e.route];
    const double j = tx_energy(cfg_.packet_bits, r.levels[e.hop], cfg_.energy);
    charge(e.node, EnergyMode::Tx, j, e.time);
    s.rep.energy_j += j;
    Event rx{e.time + airtime_s(cfg_.packet_bits, cfg_.energy), EventKind::Rx, r.vertices[e.hop + 1], 0,
             e.session};
    rx.route = e.route;
    rx.hop = e.hop + 1;
    push(rx);
  }

  void on_rx(const Event& e) {
    Session& s = sessions_[e.session];
    if (e.node == sink_) {
      ++s.rep.delivered;
      ++report_.delivered;
      return;
    }
    if (!alive_[e.node]) {
      ++s.rep.dropped;
      return;
    }
    const double j = rx_energy(cfg_.packet_bits, cfg_.energy);
    charge(e.node, EnergyMode::Rx, j, e.time);
    s.rep.energy_j += j;
    Event tx{e.time, EventKind::Tx, e.node, 0, e.session};
    tx.route = e.route;
    tx.hop = e.hop;
    push(tx);
  }

  void on_report(double now) {
    ledger_.accrue_all(now);
    IntervalReport ir;
    ir.time_s = now;
    std::size_t covered = 0;
    for (const auto& c : cover_) {
      if (std::any_of(c.begin(), c.end(), [this](NodeId i) { return alive_[i]; })) ++covered;
    }
    ir.coverage_pct = cover_.empty() ? 0.0 : 100.0 * static_cast<double>(covered) / static_cast<double>(cover_.size());
    for (std::size_t m = 0; m < kEnergyModes; ++m) ir.energy_j[m] = ledger_.total(static_cast<EnergyMode>(m));
    ir.total_energy_j = ledger_.total();
    ir.alive = static_cast<std::uint32_t>(std::count(alive_.begin(), alive_.end(), true));
    ir.generated = report_.generated;
    ir.delivered = report_.delivered;
    report_.intervals.push_back(ir);

    if (options_.record_ledger) {
      for (NodeId i = 0; i < n_; ++i) {
        LedgerRow row;
        row.time_s = now;
        row.node = i;
        for (std::size_t m = 0; m < kEnergyModes; ++m) row.spent_j[m] = ledger_.spent(i, static_cast<EnergyMode>(m));
        row.remaining_j = ledger_.remaining(i);
        report_.ledger_rows.push_back(row);
      }
    }
  }

  void finish() {
    ledger_.accrue_all(cfg_.duration_s);
    for (std::size_t m = 0; m < kEnergyModes; ++m) report_.energy_j[m] = ledger_.total(static_cast<EnergyMode>(m));
    report_.total_energy_j = ledger_.total();
    report_.conservation_error_j = ledger_.conservation_error();
    // Nothing generated means nothing lost.
    report_.delivery_ratio = report_.generated == 0
                                 ? 1.0
                                 : static_cast<double>(report_.delivered) / static_cast<double>(report_.generated);
    report_.mean_node_energy_j = n_ == 0 ? 0.0 : report_.total_energy_j / static_cast<double>(n_);
    for (const Session& s : sessions_) report_.sessions.push_back(s.rep);
    report_.digest = digest_;
  }

  const ScenarioConfig& cfg_;
  std::uint64_t seed_;
  Protocol protocol_;
  const RunOptions& options_;
  Deployment dep_;
  std::uint32_t n_;
  NodeId sink_;
  std::vector<NodePos> all_;
  Digraph full_;
  EnergyLedger ledger_;
  std::vector<bool> alive_;
  std::vector<std::vector<NodeId>> cover_;
  double merr_distance_ = 0.0;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::set<std::pair<double, std::uint32_t>> alarms_;
  std::vector<std::optional<double>> alarm_at_;
  std::uint64_t seq_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;

  std::vector<Session> sessions_;
  std::deque<SessionRoute> routes_;
  bool ready_ = false;
  bool setup_pending_ = false;

  RunReport report_;
};

double stddev(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::NodeDeath: return "node_death";
    case EventKind::Setup: return "setup";
    case EventKind::Wake: return "wake";
    case EventKind::Sleep: return "sleep";
    case EventKind::Rx: return "rx";
    case EventKind::Tx: return "tx";
    case EventKind::PacketGen: return "packet_gen";
    case EventKind::Report: return "report";
  }
  return "unknown";
}

Deployment deploy(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const std::uint32_t regions = config.region_count();
  const std::uint32_t rx = config.regions_x();
  const double size = config.region_size_m;
  std::mt19937_64 rng(derive(seed, Stream::Deploy));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Deployment d;
  d.nodes.reserve(config.node_count);
  for (NodeId i = 0; i < config.node_count; ++i) {
    const std::uint32_t r = i % regions;
    NodePos p;
    p.id = i;
    p.x = (static_cast<double>(r % rx) + unit(rng)) * size;
    p.y = (static_cast<double>(r / rx) + unit(rng)) * size;
    p.radio_range = config.radio_range_m;
    p.region_id = static_cast<int>(r);
    d.nodes.push_back(p);
  }

  d.boundary.assign(regions, 0);
  std::vector<double> best(regions, std::numeric_limits<double>::infinity());
  for (const NodePos& p : d.nodes) {
    const auto r = static_cast<std::uint32_t>(*p.region_id);
    const double dist = distance_to(p, region_center(config, r));
    if (dist < best[r]) {
      best[r] = dist;
      d.boundary[r] = p.id;
    }
  }
  for (NodeId b : d.boundary) d.nodes[b].is_boundary_node = true;
  return d;
}

RunReport run(const ScenarioConfig& config, std::uint64_t seed, Protocol protocol, const RunOptions& options) {
  config.validate();
  Simulation sim(config, seed, protocol, options);
  return sim.execute();
}

const MetricStat& BatchReport::metric(std::string_view name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw Error(ErrorKind::InvalidInput, fmt::format("no batch metric named '{}'", name));
}

std::vector<MetricStat> summarize(std::span<const RunReport> runs) {
  using Getter = double (*)(const RunReport&);
  static const std::pair<const char*, Getter> kMetrics[] = {
      {"total_energy_j", [](const RunReport& r) { return r.total_energy_j; }},
      {"energy_tx_j", [](const RunReport& r) { return r.energy_j[0]; }},
      {"energy_rx_j", [](const RunReport& r) { return r.energy_j[1]; }},
      {"energy_sense_j", [](const RunReport& r) { return r.energy_j[2]; }},
      {"energy_sleep_j", [](const RunReport& r) { return r.energy_j[3]; }},
      {"delivery_ratio", [](const RunReport& r) { return r.delivery_ratio; }},
      {"lifetime_s", [](const RunReport& r) { return r.lifetime_s; }},
      {"mean_node_energy_j", [](const RunReport& r) { return r.mean_node_energy_j; }},
      {"deaths", [](const RunReport& r) { return static_cast<double>(r.deaths); }},
      {"flood_tx", [](const RunReport& r) { return static_cast<double>(r.flood.tx); }},
      {"flood_broadcasts", [](const RunReport& r) { return static_cast<double>(r.flood.broadcasts); }},
      {"final_coverage_pct",
       [](const RunReport& r) { return r.intervals.empty() ? 0.0 : r.intervals.back().coverage_pct; }},
  };
  std::vector<MetricStat> out;
  for (const auto& [name, get] : kMetrics) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(get(r));
    MetricStat m;
    m.name = name;
    m.mean = xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    m.stddev = stddev(xs, m.mean);
    out.push_back(m);
  }
  return out;
}

BatchReport run_batch(const ScenarioConfig& config, Protocol protocol, unsigned threads,
                      const RunOptions& options) {
  config.validate();
  const std::size_t count = config.run_count;
  std::vector<std::optional<RunReport>> results(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = run(config, config.seed + i, protocol, options);
      } catch (const Error& e) {
        const std::string tag = fmt::format("seed {}", config.seed + i);
        const std::string what = e.what();
        failures[i] = std::make_exception_ptr(
            what.starts_with(tag) ? e : Error(e.kind(), fmt::format("{}: {}", tag, what)));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
  }

  BatchReport b;
  b.protocol = protocol;
  b.base_seed = config.seed;
  for (auto& r : results) b.runs.push_back(std::move(*r));
  b.metrics = summarize(b.runs);
  return b;
}

std::vector<std::pair<double, double>> coverage_series(const RunReport& report) {
  std::vector<std::pair<double, double>> out;
  out.reserve(report.intervals.size());
  for (const auto& ir : report.intervals) out.emplace_back(ir.time_s, ir.coverage_pct);
  return out;
}

double coverage_percent(std::span<const NodePos> nodes, const ScenarioConfig& config, std::uint64_t seed) {
  const auto pts = sample_points(config, seed);
  if (pts.empty()) return 0.0;
  std::size_t covered = 0;
  for (const Point& p : pts) {
    if (std::any_of(nodes.begin(), nodes.end(),
                    [&](const NodePos& n) { return covers(n, p, config.sensing_range_m); })) {
      ++covered;
    }
  }
  return 100.0 * static_cast<double>(covered) / static_cast<double>(pts.size());
}

}  // namespace regionsim
