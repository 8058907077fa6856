#pragma once

// Radio and duty-cycle energy accounting.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace regionsim {

inline constexpr std::size_t kPowerLevels = 10;

struct EnergyParams {
  double p_comm_max_w = 0.160;   // total radio draw at the top power level
  double p_tx_floor_w = 0.060;   // total radio draw at the bottom power level
  double p_rx_w = 0.120;
  double p_sense_w = 0.012;
  double p_sleep_w = 0.0005;
  double bandwidth_bps = 50'000.0;
  double min_level_dbm = -20.0;
  double max_level_dbm = 12.0;
  double battery_j = 100.0;
  double path_loss_exponent = 2.0;

  /// Ten levels evenly spaced in dBm between the two endpoints.
  std::array<double, kPowerLevels> levels_dbm() const;
  void validate() const;
};

double dbm_to_mw(double dbm);

/// Total radio draw while transmitting at `level`: linear in radiated
/// milliwatts between the floor (bottom level) and p_comm_max (top level).
double radio_draw_w(std::size_t level, const EnergyParams& params);

double airtime_s(std::uint64_t bits, const EnergyParams& params);
double tx_energy(std::uint64_t bits, std::size_t level, const EnergyParams& params);
double rx_energy(std::uint64_t bits, const EnergyParams& params);

/// Reach of `level` given the reach of the top level; radiated power needed
/// grows as distance^path_loss_exponent.
double level_range(std::size_t level, double max_range, const EnergyParams& params);

/// Lowest level whose range covers `distance`; empty beyond the top level.
std::optional<std::size_t> min_level_for_distance(double distance, double max_range,
                                                  const EnergyParams& params);

/// Transmit at the lowest sufficient level plus reception at the far end.
/// Throws Error(Unreachable) when the distance exceeds max_range.
double hop_energy(std::uint64_t bits, double distance, double max_range, const EnergyParams& params);

enum class EnergyMode { Tx, Rx, Sense, Sleep };
inline constexpr std::size_t kEnergyModes = 4;

std::string_view to_string(EnergyMode mode);

/// Duty-cycle state between radio events. There is no separate idle state.
enum class DutyMode { Sense, Sleep };

struct ModeTransition {
  double time_s = 0.0;
  std::uint32_t node = 0;
  DutyMode mode = DutyMode::Sleep;
};

/**
 * Per-node cumulative energy by mode against a fixed battery budget.
 *
 * Duty-cycle energy accrues lazily: switch_mode() and accrue_to() charge the
 * current mode's power for the time since the last accrual. A node is
 * depleted once remaining <= 0; depleted nodes accrue nothing further.
 */
class EnergyLedger {
 public:
  EnergyLedger(std::size_t nodes, const EnergyParams& params, DutyMode initial = DutyMode::Sleep);

  std::size_t size() const { return nodes_.size(); }
  const EnergyParams& params() const { return params_; }

  void charge(std::uint32_t node, EnergyMode mode, double joules);
  void accrue(std::uint32_t node, DutyMode mode, double duration_s);

  void switch_mode(std::uint32_t node, DutyMode mode, double now_s);
  void accrue_to(std::uint32_t node, double now_s);
  void accrue_all(double now_s);
  void mark_dead(std::uint32_t node, double now_s);

  DutyMode mode(std::uint32_t node) const { return nodes_.at(node).mode; }
  double since(std::uint32_t node) const { return nodes_.at(node).since; }
  bool alive(std::uint32_t node) const { return nodes_.at(node).alive; }
  bool depleted(std::uint32_t node) const { return nodes_.at(node).remaining <= 0.0; }

  double spent(std::uint32_t node, EnergyMode mode) const;
  double spent(std::uint32_t node) const;
  double remaining(std::uint32_t node) const { return nodes_.at(node).remaining; }
  double budget() const { return params_.battery_j; }

  /// Time at which the node's current duty mode alone would exhaust it.
  std::optional<double> depletion_time(std::uint32_t node) const;

  double total(EnergyMode mode) const;
  double total() const;

  std::span<const ModeTransition> timeline() const { return timeline_; }

  /// Largest |budget - remaining - Σ spent| over all nodes.
  double conservation_error() const;

 private:
  struct NodeAccount {
    std::array<double, kEnergyModes> spent{};
    double remaining = 0.0;
    DutyMode mode = DutyMode::Sleep;
    double since = 0.0;
    bool alive = true;
  };

  double duty_power(DutyMode mode) const;

  EnergyParams params_;
  std::vector<NodeAccount> nodes_;
  std::vector<ModeTransition> timeline_;
};

/// ceil(2πA / (3πR²)); R must be smaller than the side of the area.
std::uint64_t min_sensor_count(double area_m2, double sensing_range_m);

struct Lemma4Point {
  double node_count = 0.0;
  double lifetime_s = 0.0;
  double mean_node_energy_j = 0.0;  // S_i
};

struct Lemma4Report {
  double slope = 0.0;            // least-squares lifetime vs node count
  double intercept = 0.0;
  double r_squared = 0.0;
  double max_growth_excess = 0.0;  // worst (L_k/L_0)/(N_k/N_0) - 1
  double energy_cv = 0.0;          // coefficient of variation of S_i
  double tolerance = 0.15;
  bool lifetime_linear = false;
  bool energy_constant = false;

  bool passed() const { return lifetime_linear && energy_constant; }
};

/// Lifetime must grow at most linearly in node count and S_i must stay
/// roughly constant, both within `tolerance`. Needs at least three points.
Lemma4Report lemma4_diagnostics(std::span<const Lemma4Point> points, double tolerance = 0.15);

/// 100 * (1 - candidate / baseline).
double energy_savings(double candidate_j, double baseline_j);

}  // namespace regionsim
