#include "regionsim/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "regionsim/error.hpp"

namespace regionsim {

namespace {

[[noreturn]] void reject(std::string_view field, std::string_view constraint) {
  throw Error(ErrorKind::InvalidInput, fmt::format("scenario field '{}': {}", field, constraint));
}

double parse_double(std::string_view field, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) reject(field, "expected a number");
  return v;
}

std::uint64_t parse_uint(std::string_view field, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) reject(field, "expected a nonnegative integer");
  return v;
}

std::uint32_t parse_u32(std::string_view field, const std::string& text) {
  const auto v = parse_uint(field, text);
  if (v > 0xffffffffULL) reject(field, "value too large");
  return static_cast<std::uint32_t>(v);
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field number(std::string section, std::string key, T ScenarioConfig::*member) {
  const std::string name = section + "." + key;
  return Field{section, key,
               [member, name](ScenarioConfig& c, const std::string& v) {
                 if constexpr (std::is_same_v<T, double>) {
                   c.*member = parse_double(name, v);
                 } else if constexpr (std::is_same_v<T, std::uint32_t>) {
                   c.*member = parse_u32(name, v);
                 } else {
                   c.*member = parse_uint(name, v);
                 }
               },
               [member](const ScenarioConfig& c) { return fmt::format("{}", c.*member); }};
}

// Energy fields are written in the units people quote (mW, kbps) and stored in SI.
Field energy(std::string key, double EnergyParams::*member, double scale) {
  const std::string name = "energy." + key;
  return Field{"energy", key,
               [member, name, scale](ScenarioConfig& c, const std::string& v) {
                 c.energy.*member = parse_double(name, v) * scale;
               },
               [member, scale](const ScenarioConfig& c) {
                 return fmt::format("{}", c.energy.*member / scale);
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    f.push_back(number("area", "width", &ScenarioConfig::area_width_m));
    f.push_back(number("area", "height", &ScenarioConfig::area_height_m));
    f.push_back(number("area", "region_size", &ScenarioConfig::region_size_m));

    f.push_back(number("nodes", "count", &ScenarioConfig::node_count));
    f.push_back(number("nodes", "radio_range", &ScenarioConfig::radio_range_m));
    f.push_back(number("nodes", "sensing_range", &ScenarioConfig::sensing_range_m));
    f.push_back(number("nodes", "sink_x", &ScenarioConfig::sink_x_m));
    f.push_back(number("nodes", "sink_y", &ScenarioConfig::sink_y_m));
    f.push_back(Field{"nodes", "weight_mode",
                      [](ScenarioConfig& c, const std::string& v) {
                        if (v == "euclidean") c.weight_mode = WeightMode::Euclidean;
                        else if (v == "unit") c.weight_mode = WeightMode::Unit;
                        else reject("nodes.weight_mode", "expected euclidean or unit");
                      },
                      [](const ScenarioConfig& c) {
                        return std::string(c.weight_mode == WeightMode::Unit ? "unit" : "euclidean");
                      }});
    f.push_back(Field{"nodes", "cell_metric",
                      [](ScenarioConfig& c, const std::string& v) {
                        if (v == "hops") c.cell_metric = CellMetric::Hops;
                        else if (v == "weighted") c.cell_metric = CellMetric::Weighted;
                        else reject("nodes.cell_metric", "expected hops or weighted");
                      },
                      [](const ScenarioConfig& c) {
                        return std::string(c.cell_metric == CellMetric::Hops ? "hops" : "weighted");
                      }});
    f.push_back(number("nodes", "tie_epsilon", &ScenarioConfig::tie_epsilon));

    f.push_back(energy("p_comm_max_mw", &EnergyParams::p_comm_max_w, 1e-3));
    f.push_back(energy("p_tx_floor_mw", &EnergyParams::p_tx_floor_w, 1e-3));
    f.push_back(energy("p_rx_mw", &EnergyParams::p_rx_w, 1e-3));
    f.push_back(energy("p_sense_mw", &EnergyParams::p_sense_w, 1e-3));
    f.push_back(energy("p_sleep_mw", &EnergyParams::p_sleep_w, 1e-3));
    f.push_back(energy("bandwidth_kbps", &EnergyParams::bandwidth_bps, 1e3));
    f.push_back(energy("min_level_dbm", &EnergyParams::min_level_dbm, 1.0));
    f.push_back(energy("max_level_dbm", &EnergyParams::max_level_dbm, 1.0));
    f.push_back(energy("battery_j", &EnergyParams::battery_j, 1.0));
    f.push_back(energy("path_loss_exponent", &EnergyParams::path_loss_exponent, 1.0));

    f.push_back(number("traffic", "sessions", &ScenarioConfig::sessions));
    f.push_back(number("traffic", "duration_s", &ScenarioConfig::duration_s));
    f.push_back(number("traffic", "init_phase_s", &ScenarioConfig::init_phase_s));
    f.push_back(number("traffic", "packet_bits", &ScenarioConfig::packet_bits));
    f.push_back(number("traffic", "packet_rate_hz", &ScenarioConfig::packet_rate_hz));
    f.push_back(number("traffic", "report_interval_s", &ScenarioConfig::report_interval_s));
    f.push_back(number("traffic", "control_bits", &ScenarioConfig::control_bits));
    f.push_back(Field{"traffic", "protocol",
                      [](ScenarioConfig& c, const std::string& v) { c.protocol = parse_protocol(v); },
                      [](const ScenarioConfig& c) { return std::string(to_string(c.protocol)); }});
    f.push_back(number("traffic", "seed", &ScenarioConfig::seed));
    f.push_back(number("traffic", "runs", &ScenarioConfig::run_count));
    f.push_back(number("traffic", "coverage_samples", &ScenarioConfig::coverage_samples));
    f.push_back(Field{"traffic", "baseline_duty",
                      [](ScenarioConfig& c, const std::string& v) {
                        if (v == "always_on") c.baseline_duty = BaselineDuty::AlwaysOn;
                        else if (v == "route_only") c.baseline_duty = BaselineDuty::RouteOnly;
                        else reject("traffic.baseline_duty", "expected always_on or route_only");
                      },
                      [](const ScenarioConfig& c) { return std::string(to_string(c.baseline_duty)); }});
    return f;
  }();
  return all;
}

bool whole_multiple(double total, double part) {
  const double k = total / part;
  return std::abs(k - std::round(k)) < 1e-9 && std::round(k) >= 1.0;
}

}  // namespace

std::string_view to_string(BaselineDuty duty) {
  return duty == BaselineDuty::AlwaysOn ? "always_on" : "route_only";
}

std::uint32_t ScenarioConfig::regions_x() const {
  return static_cast<std::uint32_t>(std::lround(area_width_m / region_size_m));
}

std::uint32_t ScenarioConfig::regions_y() const {
  return static_cast<std::uint32_t>(std::lround(area_height_m / region_size_m));
}

void ScenarioConfig::validate() const {
  if (!(area_width_m > 0.0)) reject("area.width", "must be positive");
  if (!(area_height_m > 0.0)) reject("area.height", "must be positive");
  if (!(region_size_m > 0.0)) reject("area.region_size", "must be positive");
  if (!whole_multiple(area_width_m, region_size_m) || !whole_multiple(area_height_m, region_size_m)) {
    reject("area.region_size", "must divide the area into whole regions");
  }
  if (node_count < region_count()) {
    reject("nodes.count", fmt::format("needs at least one node per region ({} regions)", region_count()));
  }
  if (!(radio_range_m > 0.0)) reject("nodes.radio_range", "must be positive");
  if (!(sensing_range_m > 0.0)) reject("nodes.sensing_range", "must be positive");
  if (sink_x_m < 0.0 || sink_x_m > area_width_m) reject("nodes.sink_x", "must lie inside the area");
  if (sink_y_m < 0.0 || sink_y_m > area_height_m) reject("nodes.sink_y", "must lie inside the area");
  if (tie_epsilon < 0.0) reject("nodes.tie_epsilon", "must be nonnegative");
  const std::pair<const char*, double> powers[] = {
      {"energy.p_comm_max_mw", energy.p_comm_max_w}, {"energy.p_tx_floor_mw", energy.p_tx_floor_w},
      {"energy.p_rx_mw", energy.p_rx_w},             {"energy.p_sense_mw", energy.p_sense_w},
      {"energy.p_sleep_mw", energy.p_sleep_w},       {"energy.bandwidth_kbps", energy.bandwidth_bps},
      {"energy.battery_j", energy.battery_j}};
  for (const auto& [name, value] : powers) {
    if (!(value > 0.0) || !std::isfinite(value)) reject(name, "must be positive");
  }
  if (!(energy.max_level_dbm > energy.min_level_dbm)) reject("energy.max_level_dbm", "must exceed min_level_dbm");
  if (energy.p_tx_floor_w > energy.p_comm_max_w) reject("energy.p_tx_floor_mw", "must not exceed p_comm_max_mw");
  if (energy.path_loss_exponent < 2.0 || energy.path_loss_exponent > 4.0) {
    reject("energy.path_loss_exponent", "must be within [2, 4]");
  }
  if (!(duration_s > 0.0)) reject("traffic.duration_s", "must be positive");
  if (init_phase_s < 0.0 || init_phase_s >= duration_s) {
    reject("traffic.init_phase_s", "must be nonnegative and shorter than the run");
  }
  if (packet_bits == 0) reject("traffic.packet_bits", "must be positive");
  if (control_bits == 0) reject("traffic.control_bits", "must be positive");
  if (!(packet_rate_hz > 0.0)) reject("traffic.packet_rate_hz", "must be positive");
  if (!(report_interval_s > 0.0)) reject("traffic.report_interval_s", "must be positive");
  if (run_count == 0) reject("traffic.runs", "must be at least 1");
  if (coverage_samples == 0) reject("traffic.coverage_samples", "must be at least 1");
}

ScenarioConfig parse_scenario(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidInput, fmt::format("scenario line {}: {}", e.line(), e.message()));
  }

  ScenarioConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      reject(section, "keys must appear inside a [section]");
    }
    for (const auto& [key, value] : body) {
      const auto& all = fields();
      auto it = std::find_if(all.begin(), all.end(),
                             [&](const Field& f) { return f.section == section && f.key == key; });
      if (it == all.end()) reject(section + "." + key, "unknown field");
      it->set(config, value.data());
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_scenario(const ScenarioConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += fmt::format("[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(config));
  }
  return out;
}

}  // namespace regionsim
