// regionsim: run, batch, compare and property-check the region routing simulator.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "regionsim/error.hpp"
#include "regionsim/lemma_suite.hpp"
#include "regionsim/report_io.hpp"
#include "regionsim/scenario.hpp"
#include "regionsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace regionsim;

namespace {

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> runs;
  std::string out;
  unsigned threads = 0;
};

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.scenario.empty() ? ScenarioConfig{} : load_scenario(c.scenario);
  if (c.seed) cfg.seed = *c.seed;
  if (c.runs) cfg.run_count = *c.runs;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Common& c, bool batch) {
  cmd->add_option("--scenario", c.scenario, "Scenario file with [area] [nodes] [energy] [traffic] sections")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Run seed (overrides the scenario)");
  cmd->add_option("--out", c.out, "Output directory")->required();
  if (batch) {
    cmd->add_option("--runs", c.runs, "Number of seeds (overrides the scenario)")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "Worker threads, 0 = one per core");
  }
}

std::vector<std::uint32_t> parse_sizes(const std::string& text) {
  std::vector<std::uint32_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v < 2) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, fmt::format("--sizes: '{}' is not a node count >= 2", item));
    }
  }
  if (sizes.empty()) throw Error(ErrorKind::InvalidInput, "--sizes needs at least one node count");
  return sizes;
}

void print_run(const RunReport& r) {
  std::cout << fmt::format("{:<5} seed {:<6} energy {:>12.3f} J  delivery {:.4f}  deaths {:<4} digest {:016x}\n",
                           to_string(r.protocol), r.seed, r.total_energy_j, r.delivery_ratio, r.deaths, r.digest);
}

void print_batch(const BatchReport& b) {
  const auto& e = b.metric("total_energy_j");
  const auto& d = b.metric("delivery_ratio");
  std::cout << fmt::format("{:<5} {} runs  energy {:>12.3f} +- {:<10.3f} J  delivery {:.4f}\n", to_string(b.protocol),
                           b.runs.size(), e.mean, e.stddev, d.mean);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-based routing simulator for wireless sensor networks"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_protocol = "res";
  bool run_trace = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate one seed");
  add_common(run_cmd, run_opts, false);
  run_cmd->add_option("--protocol", run_protocol, "res, dt, mte, merr, or, or all");
  run_cmd->add_flag("--trace-flood", run_trace, "Write flood_trace.csv");

  Common batch_opts;
  std::string batch_protocol = "res";
  bool batch_trace = false;
  auto* batch_cmd = app.add_subcommand("batch", "Simulate run_count seeds and report mean and std");
  add_common(batch_cmd, batch_opts, true);
  batch_cmd->add_option("--protocol", batch_protocol, "res, dt, mte, merr, or, or all");
  batch_cmd->add_flag("--trace-flood", batch_trace, "Write flood_trace.csv per run");

  Common cmp_opts;
  std::string cmp_protocols = "all";
  auto* cmp_cmd = app.add_subcommand("compare", "Batch every listed protocol on the same seeds");
  add_common(cmp_cmd, cmp_opts, true);
  cmp_cmd->add_option("--protocols", cmp_protocols, "Comma-separated tags or all");

  LemmaSuiteOptions lemma;
  std::string sizes = "10,20,50";
  auto* lemma_cmd = app.add_subcommand("check-lemmas", "Randomized flood, containment and stretch checks");
  lemma_cmd->add_option("--sizes", sizes, "Comma-separated graph sizes");
  lemma_cmd->add_option("--seed", lemma.seed, "Generator seed");
  lemma_cmd->add_option("--graphs", lemma.graphs_per_size, "Graphs per size")->check(CLI::PositiveNumber);
  lemma_cmd->add_option("--max-seeds", lemma.max_seeds, "Largest seed set")->check(CLI::PositiveNumber);
  lemma_cmd->add_option("--routes", lemma.routes_per_graph, "Seed-pair routes sampled per graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::InvalidInput);
  }

  try {
    if (*run_cmd) {
      const ScenarioConfig cfg = load(run_opts);
      RunOptions opts;
      opts.record_flood_trace = run_trace;
      const auto protocols = parse_protocol_list(run_protocol);
      for (Protocol p : protocols) {
        const RunReport r = run(cfg, cfg.seed, p, opts);
        const fs::path dir = protocols.size() == 1 ? fs::path(run_opts.out)
                                                   : fs::path(run_opts.out) / std::string(to_string(p));
        emit_outputs(r, dir, run_trace);
        print_run(r);
      }
    } else if (*batch_cmd) {
      const ScenarioConfig cfg = load(batch_opts);
      RunOptions opts;
      opts.record_flood_trace = batch_trace;
      const auto protocols = parse_protocol_list(batch_protocol);
      for (Protocol p : protocols) {
        const BatchReport b = run_batch(cfg, p, batch_opts.threads, opts);
        const fs::path dir = protocols.size() == 1 ? fs::path(batch_opts.out)
                                                   : fs::path(batch_opts.out) / std::string(to_string(p));
        emit_batch_outputs(b, dir, batch_trace);
        print_batch(b);
      }
    } else if (*cmp_cmd) {
      const ScenarioConfig cfg = load(cmp_opts);
      std::vector<BatchReport> batches;
      for (Protocol p : parse_protocol_list(cmp_protocols)) {
        batches.push_back(run_batch(cfg, p, cmp_opts.threads));
        print_batch(batches.back());
      }
      emit_comparison(batches, cmp_opts.out);
      std::cout << "wrote " << (fs::path(cmp_opts.out) / "comparison.csv").string() << '\n';
    } else if (*lemma_cmd) {
      lemma.sizes = parse_sizes(sizes);
      const LemmaSuiteReport r = run_lemma_suite(lemma);
      write_lemma_report(std::cout, r);
      return r.passed() ? 0 : static_cast<int>(ErrorKind::Internal);
    }
  } catch (const Error& e) {
    std::cerr << "regionsim: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "regionsim: internal: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Internal);
  }
  return 0;
}
