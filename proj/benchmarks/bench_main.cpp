#include <benchmark/benchmark.h>

#include "regionsim/flood.hpp"
#include "regionsim/generators.hpp"
#include "regionsim/regions.hpp"
#include "regionsim/routing.hpp"
#include "regionsim/simulator.hpp"

using namespace regionsim;

namespace {

GeneratedGraph graph_of(std::int64_t n) {
  RandomGraphParams p;
  p.node_count = static_cast<std::uint32_t>(n);
  p.density = 4.0;
  return random_connected_unit_disk(p, 17);
}

void BM_RegionFlood(benchmark::State& state) {
  const auto gg = graph_of(state.range(0));
  const RegionSeedSet seeds(random_seeds(gg.graph.size(), 10, 3), gg.graph.size());
  for (auto _ : state) benchmark::DoNotOptimize(run_flood(gg.graph, seeds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RegionFlood)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_ShortestPath(benchmark::State& state) {
  const auto gg = graph_of(state.range(0));
  const Vertex last = static_cast<Vertex>(gg.graph.size() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(shortest_path(gg.graph, 0, last));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShortestPath)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNLogN);

void BM_CellsAndDual(benchmark::State& state) {
  const auto gg = graph_of(state.range(0));
  const RegionSeedSet seeds(random_seeds(gg.graph.size(), 10, 3), gg.graph.size());
  for (auto _ : state) {
    const auto cells = compute_boundary_cells(gg.graph, seeds);
    benchmark::DoNotOptimize(build_boundary_dual_graph(gg.graph, cells));
  }
}
BENCHMARK(BM_CellsAndDual)->Arg(140)->Arg(560);

void BM_SingleRun(benchmark::State& state) {
  ScenarioConfig c;
  c.node_count = static_cast<std::uint32_t>(state.range(0));
  const auto p = static_cast<Protocol>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run(c, 1, p));
}
BENCHMARK(BM_SingleRun)
    ->Args({140, static_cast<int>(Protocol::Res)})
    ->Args({140, static_cast<int>(Protocol::Or)})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
