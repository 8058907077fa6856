#pragma once

// Randomized checks of the flooding, containment and stretch properties over
// generated unit-disk graphs.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace regionsim {

struct LemmaSuiteOptions {
  std::vector<std::uint32_t> sizes{10, 20, 50};
  std::uint32_t graphs_per_size = 50;
  std::uint32_t max_seeds = 5;
  std::uint32_t routes_per_graph = 5;
  std::uint64_t seed = 1;
};

struct TightnessRow {
  int arc_count = 0;
  double eps = 0.0;
  double ratio = 0.0;
  double expected = 0.0;
};

struct LemmaSuiteReport {
  std::uint32_t graphs = 0;

  std::uint64_t labels_checked = 0;  // flood labels vs multi-source BFS
  std::uint64_t label_mismatches = 0;

  std::uint64_t containment_checked = 0;
  std::uint64_t containment_failures = 0;
  std::uint64_t tie_paths = 0;  // containment paths through tie nodes

  std::uint64_t routes_checked = 0;  // seed-pair boundary routes
  std::uint64_t bound_violations = 0;
  double max_ratio = 0.0;

  std::vector<TightnessRow> tightness;
  std::uint64_t tightness_mismatches = 0;

  std::vector<std::string> failures;  // first few, for diagnostics

  bool passed() const {
    return label_mismatches == 0 && containment_failures == 0 && bound_violations == 0 &&
           tightness_mismatches == 0;
  }
};

LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options);

void write_lemma_report(std::ostream& out, const LemmaSuiteReport& report);

}  // namespace regionsim
