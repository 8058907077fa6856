#include "regionsim/lemma_suite.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "regionsim/flood.hpp"
#include "regionsim/generators.hpp"
#include "regionsim/regions.hpp"

namespace regionsim {

namespace {

constexpr std::size_t kMaxFailureNotes = 20;

void note(LemmaSuiteReport& r, std::string msg) {
  if (r.failures.size() < kMaxFailureNotes) r.failures.push_back(std::move(msg));
}

void check_labels(LemmaSuiteReport& r, const Digraph& g, const RegionSeedSet& seeds,
                  const FloodResult& flood, std::uint32_t graph_index) {
  const auto nearest = multi_source_hops(g, seeds.seeds());
  std::vector<std::vector<Hops>> per_seed;
  for (Vertex s : seeds.seeds()) per_seed.push_back(hops_from(g, s));

  for (Vertex v = 0; v < g.size(); ++v) {
    ++r.labels_checked;
    std::vector<RegionId> argmin;
    if (nearest[v]) {
      for (std::size_t i = 0; i < per_seed.size(); ++i) {
        if (per_seed[i][v] == nearest[v]) argmin.push_back(seeds.seeds()[i]);
      }
    }
    const FloodState& st = flood.states[v];
    if (st.distance != nearest[v] || st.regions != argmin) {
      ++r.label_mismatches;
      note(r, fmt::format("graph {} node {}: flood label disagrees with multi-source BFS", graph_index, v));
    }
  }
}

}  // namespace

LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options) {
  LemmaSuiteReport r;
  std::mt19937_64 rng(options.seed);

  for (std::uint32_t size : options.sizes) {
    for (std::uint32_t k = 0; k < options.graphs_per_size; ++k) {
      const std::uint32_t index = r.graphs++;
      RandomGraphParams params;
      params.node_count = size;
      const GeneratedGraph gen = random_connected_unit_disk(params, rng());
      const Digraph& g = gen.graph;
      const std::size_t seed_count =
          std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(options.max_seeds, size))(rng);
      const RegionSeedSet seeds(random_seeds(g.size(), seed_count, rng()), g.size());

      check_labels(r, g, seeds, run_flood(g, seeds), index);

      const BoundaryCellMap cells = compute_boundary_cells(g, seeds, CellMetric::Hops);
      for (Vertex u = 0; u < g.size(); ++u) {
        const ContainmentCheck c = verify_cell_containment(g, cells, u);
        ++r.containment_checked;
        if (c.touches_tie) ++r.tie_paths;
        if (!c.passed) {
          ++r.containment_failures;
          note(r, fmt::format("graph {} node {}: shortest path to its seed leaves the cell at {}", index, u,
                              c.witness ? fmt::format("{}", *c.witness) : std::string("?")));
        }
      }

      if (seeds.size() < 2) continue;
      const BoundaryDualGraph dual = build_boundary_dual_graph(g, cells);
      std::uniform_int_distribution<std::size_t> pick(0, seeds.size() - 1);
      for (std::uint32_t q = 0; q < options.routes_per_graph; ++q) {
        const Vertex s = seeds.seeds()[pick(rng)];
        Vertex t = s;
        while (t == s) t = seeds.seeds()[pick(rng)];
        const auto route = boundary_route(g, cells, dual, s, t);
        if (!route) continue;
        ++r.routes_checked;
        r.max_ratio = std::max(r.max_ratio, route->ratio);
        if (!route->within_bound) {
          ++r.bound_violations;
          note(r, fmt::format("graph {} seeds {}->{}: ratio {} exceeds {} arcs", index, s, t, route->ratio,
                              route->direct.hop_count()));
        }
      }
    }
  }

  for (int e : {2, 4, 8}) {
    for (double eps : {0.1, 0.01, 0.001}) {
      constexpr double m = 1.0;
      const TightnessInstance inst = worst_case_construction(e, m, eps);
      const BoundaryCellMap cells = compute_boundary_cells(inst.graph, inst.seeds, inst.metric);
      const BoundaryDualGraph dual = build_boundary_dual_graph(inst.graph, cells);
      const auto route = boundary_route(inst.graph, cells, dual, inst.source, inst.target);
      TightnessRow row;
      row.arc_count = e;
      row.eps = eps;
      const double direct = 2 * m + (e - 2) * eps;
      row.expected = (direct + 2 * (e - 1) * (m - eps)) / direct;
      row.ratio = route ? route->ratio : 0.0;
      if (!route || std::abs(row.ratio - row.expected) > 1e-9 * row.expected) {
        ++r.tightness_mismatches;
        note(r, fmt::format("tightness e={} eps={}: ratio {} expected {}", e, eps, row.ratio, row.expected));
      }
      r.tightness.push_back(row);
    }
  }
  return r;
}

void write_lemma_report(std::ostream& out, const LemmaSuiteReport& r) {
  out << fmt::format("graphs checked        {}\n", r.graphs);
  out << fmt::format("flood labels          {} checked, {} mismatches\n", r.labels_checked, r.label_mismatches);
  out << fmt::format("cell containment      {} checked, {} failures, {} paths through tie nodes\n",
                     r.containment_checked, r.containment_failures, r.tie_paths);
  out << fmt::format("stretch bound         {} seed-pair routes, {} violations, max ratio {:.4f}\n",
                     r.routes_checked, r.bound_violations, r.max_ratio);
  out << "worst-case stretch    e    eps      ratio        closed form\n";
  for (const auto& t : r.tightness) {
    out << fmt::format("                      {:<4} {:<8} {:<12.9f} {:.9f}\n", t.arc_count, t.eps, t.ratio, t.expected);
  }
  for (const auto& f : r.failures) out << "FAIL " << f << '\n';
  out << (r.passed() ? "all checks passed\n" : "checks FAILED\n");
}

}  // namespace regionsim
