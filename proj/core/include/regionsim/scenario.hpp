#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "regionsim/energy.hpp"
#include "regionsim/graph.hpp"
#include "regionsim/regions.hpp"
#include "regionsim/routing.hpp"

namespace regionsim {

/// What comparator protocols do with nodes that carry no traffic.
enum class BaselineDuty {
  AlwaysOn,   // every alive node stays in sensing mode
  RouteOnly,  // same sleep rule as RES: off-route nodes sleep
};

/**
 * Declarative experiment description. Every field has a default, so an empty
 * scenario file describes the reference deployment: 160 m x 160 m split into
 * 40 m regions, 140 sensors, sink at (140, 60), 15 sessions over 140 minutes.
 */
struct ScenarioConfig {
  // [area]
  double area_width_m = 160.0;
  double area_height_m = 160.0;
  double region_size_m = 40.0;

  // [nodes]
  std::uint32_t node_count = 140;
  double radio_range_m = 60.0;
  double sensing_range_m = 30.0;
  double sink_x_m = 140.0;
  double sink_y_m = 60.0;
  WeightMode weight_mode = WeightMode::Euclidean;
  CellMetric cell_metric = CellMetric::Hops;
  double tie_epsilon = 0.0;  // > 0 enables seeded per-arc weight perturbation

  // [energy]
  EnergyParams energy;

  // [traffic]
  std::uint32_t sessions = 15;
  double duration_s = 8400.0;
  double init_phase_s = 30.0;
  std::uint64_t packet_bits = 1024;
  double packet_rate_hz = 1.0;
  double report_interval_s = 1200.0;
  std::uint64_t control_bits = 128;
  Protocol protocol = Protocol::Res;
  std::uint64_t seed = 1;
  std::uint32_t run_count = 10;
  std::uint32_t coverage_samples = 10'000;
  BaselineDuty baseline_duty = BaselineDuty::AlwaysOn;

  std::uint32_t regions_x() const;
  std::uint32_t regions_y() const;
  std::uint32_t region_count() const { return regions_x() * regions_y(); }

  /// Throws Error(InvalidInput) naming the field and the violated constraint.
  void validate() const;
};

ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Renders a config in the scenario file format; parse_scenario() reads it back.
std::string format_scenario(const ScenarioConfig& config);

std::string_view to_string(BaselineDuty duty);

}  // namespace regionsim
