#include "regionsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "regionsim/error.hpp"

namespace regionsim {

std::array<double, kPowerLevels> EnergyParams::levels_dbm() const {
  std::array<double, kPowerLevels> levels{};
  const double step = (max_level_dbm - min_level_dbm) / static_cast<double>(kPowerLevels - 1);
  for (std::size_t i = 0; i < kPowerLevels; ++i) {
    levels[i] = min_level_dbm + step * static_cast<double>(i);
  }
  levels.back() = max_level_dbm;
  return levels;
}

void EnergyParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, std::string(name) + " must be positive");
    }
  };
  positive(p_comm_max_w, "p_comm_max");
  positive(p_tx_floor_w, "p_tx_floor");
  positive(p_rx_w, "p_rx");
  positive(p_sense_w, "p_sense");
  positive(p_sleep_w, "p_sleep");
  positive(bandwidth_bps, "bandwidth");
  positive(battery_j, "battery");
  if (!(max_level_dbm > min_level_dbm)) {
    throw Error(ErrorKind::InvalidInput, "power levels must increase from min to max dBm");
  }
  if (p_tx_floor_w > p_comm_max_w) {
    throw Error(ErrorKind::InvalidInput, "p_tx_floor must not exceed p_comm_max");
  }
  if (path_loss_exponent < 2.0 || path_loss_exponent > 4.0) {
    throw Error(ErrorKind::InvalidInput, "path_loss_exponent must be within [2, 4]");
  }
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

namespace {

void check_level(std::size_t level) {
  if (level >= kPowerLevels) {
    throw Error(ErrorKind::InvalidInput, "power level " + std::to_string(level) + " out of range 0..9");
  }
}

void check_bits(std::uint64_t bits) {
  if (bits == 0) throw Error(ErrorKind::InvalidInput, "packet must carry at least one bit");
}

}  // namespace

double radio_draw_w(std::size_t level, const EnergyParams& params) {
  check_level(level);
  const auto levels = params.levels_dbm();
  const double lo = dbm_to_mw(levels.front());
  const double hi = dbm_to_mw(levels.back());
  if (level == 0) return params.p_tx_floor_w;
  if (level == kPowerLevels - 1) return params.p_comm_max_w;
  const double frac = (dbm_to_mw(levels[level]) - lo) / (hi - lo);
  return params.p_tx_floor_w + frac * (params.p_comm_max_w - params.p_tx_floor_w);
}

double airtime_s(std::uint64_t bits, const EnergyParams& params) {
  return static_cast<double>(bits) / params.bandwidth_bps;
}

double tx_energy(std::uint64_t bits, std::size_t level, const EnergyParams& params) {
  check_bits(bits);
  return radio_draw_w(level, params) * airtime_s(bits, params);
}

double rx_energy(std::uint64_t bits, const EnergyParams& params) {
  check_bits(bits);
  return params.p_rx_w * airtime_s(bits, params);
}

double level_range(std::size_t level, double max_range, const EnergyParams& params) {
  check_level(level);
  if (level == kPowerLevels - 1) return max_range;
  const auto levels = params.levels_dbm();
  const double ratio = dbm_to_mw(levels[level]) / dbm_to_mw(levels.back());
  return max_range * std::pow(ratio, 1.0 / params.path_loss_exponent);
}

std::optional<std::size_t> min_level_for_distance(double distance, double max_range,
                                                  const EnergyParams& params) {
  for (std::size_t level = 0; level < kPowerLevels; ++level) {
    if (distance <= level_range(level, max_range, params)) return level;
  }
  return std::nullopt;
}

double hop_energy(std::uint64_t bits, double distance, double max_range, const EnergyParams& params) {
  auto level = min_level_for_distance(distance, max_range, params);
  if (!level) {
    throw Error(ErrorKind::Unreachable, "hop of " + std::to_string(distance) +
                                            " m exceeds the top power level's range");
  }
  return tx_energy(bits, *level, params) + rx_energy(bits, params);
}

std::string_view to_string(EnergyMode mode) {
  switch (mode) {
    case EnergyMode::Tx: return "tx";
    case EnergyMode::Rx: return "rx";
    case EnergyMode::Sense: return "sense";
    case EnergyMode::Sleep: return "sleep";
  }
  return "unknown";
}

EnergyLedger::EnergyLedger(std::size_t nodes, const EnergyParams& params, DutyMode initial)
    : params_(params), nodes_(nodes) {
  params_.validate();
  for (auto& n : nodes_) {
    n.remaining = params_.battery_j;
    n.mode = initial;
  }
}

double EnergyLedger::duty_power(DutyMode mode) const {
  return mode == DutyMode::Sense ? params_.p_sense_w : params_.p_sleep_w;
}

void EnergyLedger::charge(std::uint32_t node, EnergyMode mode, double joules) {
  if (!(joules >= 0.0)) throw Error(ErrorKind::InvalidInput, "energy charge must be nonnegative");
  auto& n = nodes_.at(node);
  if (!n.alive) return;
  n.spent[static_cast<std::size_t>(mode)] += joules;
  n.remaining -= joules;
}

void EnergyLedger::accrue(std::uint32_t node, DutyMode mode, double duration_s) {
  if (!(duration_s >= 0.0)) throw Error(ErrorKind::InvalidInput, "duration must be nonnegative");
  if (duration_s == 0.0) return;
  charge(node, mode == DutyMode::Sense ? EnergyMode::Sense : EnergyMode::Sleep,
         duty_power(mode) * duration_s);
}

void EnergyLedger::accrue_to(std::uint32_t node, double now_s) {
  auto& n = nodes_.at(node);
  if (!n.alive) return;
  if (now_s < n.since) throw Error(ErrorKind::Internal, "ledger accrual moved backwards in time");
  const double dt = now_s - n.since;
  n.since = now_s;
  accrue(node, n.mode, dt);
}

void EnergyLedger::switch_mode(std::uint32_t node, DutyMode mode, double now_s) {
  accrue_to(node, now_s);
  auto& n = nodes_.at(node);
  if (!n.alive || n.mode == mode) return;
  n.mode = mode;
  timeline_.push_back(ModeTransition{now_s, node, mode});
}

void EnergyLedger::accrue_all(double now_s) {
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) accrue_to(i, now_s);
}

void EnergyLedger::mark_dead(std::uint32_t node, double now_s) {
  accrue_to(node, now_s);
  nodes_.at(node).alive = false;
}

double EnergyLedger::spent(std::uint32_t node, EnergyMode mode) const {
  return nodes_.at(node).spent[static_cast<std::size_t>(mode)];
}

double EnergyLedger::spent(std::uint32_t node) const {
  const auto& s = nodes_.at(node).spent;
  return std::accumulate(s.begin(), s.end(), 0.0);
}

std::optional<double> EnergyLedger::depletion_time(std::uint32_t node) const {
  const auto& n = nodes_.at(node);
  if (!n.alive) return std::nullopt;
  return n.since + std::max(n.remaining, 0.0) / duty_power(n.mode);
}

double EnergyLedger::total(EnergyMode mode) const {
  double sum = 0.0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) sum += spent(i, mode);
  return sum;
}

double EnergyLedger::total() const {
  double sum = 0.0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) sum += spent(i);
  return sum;
}

double EnergyLedger::conservation_error() const {
  double worst = 0.0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    worst = std::max(worst, std::abs(params_.battery_j - nodes_[i].remaining - spent(i)));
  }
  return worst;
}

std::uint64_t min_sensor_count(double area_m2, double sensing_range_m) {
  if (!(area_m2 > 0.0) || !(sensing_range_m > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "area and sensing range must be positive");
  }
  if (sensing_range_m >= std::sqrt(area_m2)) {
    throw Error(ErrorKind::InvalidInput, "sensing range must be smaller than the area side");
  }
  // The π factors cancel; dividing them out keeps exact cases exact.
  const double n = (2.0 * area_m2) / (3.0 * sensing_range_m * sensing_range_m);
  return static_cast<std::uint64_t>(std::ceil(n));
}

Lemma4Report lemma4_diagnostics(std::span<const Lemma4Point> points, double tolerance) {
  if (points.size() < 3) {
    throw Error(ErrorKind::InvalidInput, "scaling diagnostics need at least three batch points");
  }
  std::vector<Lemma4Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.node_count < b.node_count; });

  Lemma4Report r;
  r.tolerance = tolerance;
  const double k = static_cast<double>(sorted.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : sorted) {
    sx += p.node_count;
    sy += p.lifetime_s;
    sxx += p.node_count * p.node_count;
    sxy += p.node_count * p.lifetime_s;
    syy += p.lifetime_s * p.lifetime_s;
  }
  const double denom = k * sxx - sx * sx;
  if (denom <= 0.0) throw Error(ErrorKind::InvalidInput, "batch points need distinct node counts");
  r.slope = (k * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / k;
  const double ss_tot = syy - sy * sy / k;
  double ss_res = 0.0;
  for (const auto& p : sorted) {
    const double e = p.lifetime_s - (r.intercept + r.slope * p.node_count);
    ss_res += e * e;
  }
  r.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  const auto& base = sorted.front();
  for (const auto& p : sorted) {
    if (base.lifetime_s <= 0.0) break;
    const double growth = (p.lifetime_s / base.lifetime_s) / (p.node_count / base.node_count);
    r.max_growth_excess = std::max(r.max_growth_excess, growth - 1.0);
  }
  r.lifetime_linear = r.max_growth_excess <= tolerance;

  double mean = 0.0;
  for (const auto& p : sorted) mean += p.mean_node_energy_j;
  mean /= k;
  double var = 0.0;
  for (const auto& p : sorted) var += (p.mean_node_energy_j - mean) * (p.mean_node_energy_j - mean);
  var /= k;
  r.energy_cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  r.energy_constant = r.energy_cv <= tolerance;
  return r;
}

double energy_savings(double candidate_j, double baseline_j) {
  if (baseline_j == 0.0) throw Error(ErrorKind::InvalidInput, "baseline energy is zero");
  return 100.0 * (1.0 - candidate_j / baseline_j);
}

}  // namespace regionsim
