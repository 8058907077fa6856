#include <doctest.h>

#include <algorithm>
#include <set>

#include "regionsim/error.hpp"
#include "regionsim/generators.hpp"
#include "regionsim/regions.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace regionsim;

namespace {

std::vector<Vertex> as_vec(std::span<const Vertex> s) { return {s.begin(), s.end()}; }

GeneratedGraph unit_disk(std::uint32_t n, std::uint64_t seed, WeightMode mode = WeightMode::Unit) {
  RandomGraphParams p;
  p.node_count = n;
  p.weight_mode = mode;
  return random_connected_unit_disk(p, seed);
}

// Node -> seed hop distances, straight from BFS over the arc list.
struct NodeToSeed {
  std::vector<std::uint32_t> dist;
  std::vector<std::vector<Vertex>> nearest;
};

NodeToSeed node_to_seed(const Digraph& g, const std::vector<Vertex>& seeds) {
  const auto h = oracle::bfs_all_pairs(g.size(), gen::arcs_of(g));
  NodeToSeed out{std::vector<std::uint32_t>(g.size(), UINT32_MAX), std::vector<std::vector<Vertex>>(g.size())};
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex s : seeds) {
      if (h[u][s] && *h[u][s] < out.dist[u]) out.dist[u] = *h[u][s];
    }
    for (Vertex s : seeds) {
      if (h[u][s] && *h[u][s] == out.dist[u]) out.nearest[u].push_back(s);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("seed set: sorted, unique, in range") {
  RegionSeedSet s({4, 1, 3}, 5);
  CHECK(as_vec(s.seeds()) == std::vector<Vertex>{1, 3, 4});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.index_of(4) == 2u);
  CHECK_THROWS_AS(RegionSeedSet({}, 5), Error);
  CHECK_THROWS_AS(RegionSeedSet({1, 1}, 5), Error);
  CHECK_THROWS_AS(RegionSeedSet({5}, 5), Error);
}

TEST_CASE("cells: a single seed owns every node") {
  const auto g = gen::lattice(3, 4);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({5}, g.size()));
  for (Vertex v = 0; v < g.size(); ++v) {
    CHECK(cells.cell_of(v) == 5);
    CHECK(cells.owners(v).size() == 1);
  }
  CHECK(cells.members(5).size() == g.size());
  CHECK(cells.tie_nodes().empty());
}

TEST_CASE("cells: 6-node path splits in half without ties") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  CHECK(as_vec(cells.members(0)) == std::vector<Vertex>{0, 1, 2});
  CHECK(as_vec(cells.members(5)) == std::vector<Vertex>{3, 4, 5});
  CHECK(cells.tie_nodes().empty());
  CHECK(cells.seed_distance(0) == 0.0);
  CHECK(cells.seed_distance(5) == 0.0);
  CHECK(cells.seed_distance(2) == 2.0);
}

TEST_CASE("cells: 5-node path ties at the middle") {
  const auto g = gen::path_graph(5);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 4}, 5));
  CHECK(as_vec(cells.tie_nodes()) == std::vector<Vertex>{2});
  CHECK(as_vec(cells.owners(2)) == std::vector<Vertex>{0, 4});
  CHECK(cells.cell_of(2) == 0);
  CHECK(cells.in_cell(2, 4));
  CHECK(as_vec(cells.canonical_members(4)) == std::vector<Vertex>{3, 4});
}

TEST_CASE("cells: a node that reaches no seed is named") {
  // 0 <-> 1, and 2 only receives from 1.
  const std::vector<Arc> arcs{{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}};
  const Digraph g(3, arcs);
  try {
    compute_boundary_cells(g, RegionSeedSet({0}, 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }
}

TEST_CASE("cells: membership matches node-to-seed BFS on random digraphs") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto rd = gen::random_digraph(25, 0.15, seed, false);
    std::vector<Vertex> seeds = random_seeds(25, 1 + seed % 4, seed * 7);
    const auto o = node_to_seed(rd.graph, seeds);
    if (std::any_of(o.dist.begin(), o.dist.end(), [](auto d) { return d == UINT32_MAX; })) {
      CHECK_THROWS_AS(compute_boundary_cells(rd.graph, RegionSeedSet(seeds, 25)), Error);
      continue;
    }
    const auto cells = compute_boundary_cells(rd.graph, RegionSeedSet(seeds, 25));
    for (Vertex u = 0; u < 25; ++u) {
      CHECK(as_vec(cells.owners(u)) == o.nearest[u]);
      CHECK(cells.cell_of(u) == o.nearest[u].front());
      CHECK(cells.seed_distance(u) == o.dist[u]);
      const bool tie = o.nearest[u].size() > 1;
      const auto ties = cells.tie_nodes();
      CHECK((std::find(ties.begin(), ties.end(), u) != ties.end()) == tie);
    }
    for (Vertex s : seeds) {
      CHECK(cells.cell_of(s) == s);
      CHECK(cells.seed_distance(s) == 0.0);
    }
  }
}

TEST_CASE("containment: the seed itself passes with a one-vertex path") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  const auto c = verify_cell_containment(g, cells, 5);
  CHECK(c.passed);
  CHECK(c.path.vertices == std::vector<Vertex>{5});
}

TEST_CASE("containment: v2 on the 6-node path walks v2, v1, v0") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  const auto c = verify_cell_containment(g, cells, 2);
  CHECK(c.passed);
  CHECK_FALSE(c.witness.has_value());
  CHECK(c.path.vertices == std::vector<Vertex>{2, 1, 0});
}

TEST_CASE("containment: every node of random unit-disk graphs stays in its cell") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto gg = unit_disk(30, seed);
    const auto seeds = random_seeds(30, 3, seed + 1000);
    const auto cells = compute_boundary_cells(gg.graph, RegionSeedSet(seeds, 30));
    for (Vertex u = 0; u < 30; ++u) {
      const auto c = verify_cell_containment(gg.graph, cells, u);
      CHECK(c.passed);
      for (Vertex w : c.path.vertices) CHECK(cells.in_cell(w, cells.cell_of(u)));
      CHECK(c.path.vertices.front() == u);
      CHECK(c.path.vertices.back() == cells.cell_of(u));
    }
  }
}

TEST_CASE("dual: a single cell has no arcs") {
  const auto g = gen::lattice(3, 3);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({4}, 9));
  const auto dual = build_boundary_dual_graph(g, cells);
  CHECK(dual.graph().size() == 1);
  CHECK(dual.graph().arc_count() == 0);
}

TEST_CASE("dual: 6-node path has one arc each way of weight 5") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  const auto dual = build_boundary_dual_graph(g, cells);
  REQUIRE(dual.graph().size() == 2);
  CHECK(dual.graph().arc_count() == 2);
  CHECK(dual.graph().arc_weight(0, 1) == 5.0);
  CHECK(dual.graph().arc_weight(1, 0) == 5.0);
  CHECK(dual.crossing(0, 1).from == 2);
  CHECK(dual.crossing(0, 1).to == 3);
  CHECK(dual.seed_of(1) == 5);
}

TEST_CASE("dual: 6x6 lattice quadrants join only side-adjacent quadrants") {
  const auto g = gen::lattice(6, 6);
  const std::vector<Vertex> seeds{7, 10, 25, 28};  // (1,1) (1,4) (4,1) (4,4)
  const auto cells = compute_boundary_cells(g, RegionSeedSet(seeds, 36));
  CHECK(cells.tie_nodes().empty());

  // Crossing-arc enumeration on the quadrant map.
  auto quadrant = [](Vertex v) { return (v / 6 >= 3 ? 2u : 0u) + (v % 6 >= 3 ? 1u : 0u); };
  for (Vertex v = 0; v < 36; ++v) CHECK(cells.cell_of(v) == seeds[quadrant(v)]);
  std::set<std::pair<Vertex, Vertex>> expected;
  for (const auto& a : g.arcs()) {
    if (quadrant(a.from) != quadrant(a.to)) expected.insert({quadrant(a.from), quadrant(a.to)});
  }
  CHECK(expected.size() == 8);

  const auto dual = build_boundary_dual_graph(g, cells);
  std::set<std::pair<Vertex, Vertex>> got;
  for (const auto& a : dual.graph().arcs()) got.insert({a.from, a.to});
  CHECK(got == expected);
  CHECK_FALSE(dual.graph().has_arc(0, 3));
  CHECK_FALSE(dual.graph().has_arc(1, 2));
}

TEST_CASE("dual: arc weight never exceeds the three-term bound of any crossing arc") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto gg = unit_disk(25, seed, WeightMode::Euclidean);
    const auto seeds = random_seeds(25, 2 + seed % 4, seed + 50);
    const auto cells = compute_boundary_cells(gg.graph, RegionSeedSet(seeds, 25));
    const auto dual = build_boundary_dual_graph(gg.graph, cells);

    // Intra-cell distances from a Floyd-Warshall restricted to canonical cells.
    std::vector<oracle::WArc> inner;
    for (const auto& a : gen::arcs_of(gg.graph)) {
      if (cells.cell_of(a.from) == cells.cell_of(a.to)) inner.push_back(a);
    }
    const auto fw = oracle::floyd_warshall(25, inner);

    std::set<std::pair<RegionId, RegionId>> crossed;
    for (const auto& a : gen::arcs_of(gg.graph)) {
      const RegionId ca = cells.cell_of(a.from);
      const RegionId cb = cells.cell_of(a.to);
      if (ca == cb) continue;
      crossed.insert({ca, cb});
      REQUIRE(fw[ca][a.from].has_value());
      REQUIRE(fw[a.to][cb].has_value());
      const double bound = *fw[ca][a.from] + a.w + *fw[a.to][cb];
      const auto w = dual.graph().arc_weight(dual.dual_vertex(ca), dual.dual_vertex(cb));
      REQUIRE(w.has_value());
      CHECK(*w <= bound + 1e-9);
    }
    CHECK(dual.graph().arc_count() == crossed.size());
  }
}

TEST_CASE("boundary route: same cell keeps the direct path") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  const auto dual = build_boundary_dual_graph(g, cells);
  const auto r = boundary_route(g, cells, dual, 0, 2);
  REQUIRE(r.has_value());
  CHECK(r->ratio == 1.0);
  CHECK(r->boundary.vertices == r->direct.vertices);
}

TEST_CASE("boundary route: 6-node path end to end stays within e = 5") {
  const auto g = gen::path_graph(6);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0, 5}, 6));
  const auto dual = build_boundary_dual_graph(g, cells);
  const auto r = boundary_route(g, cells, dual, 0, 5);
  REQUIRE(r.has_value());
  CHECK(r->direct.hop_count() == 5);
  CHECK(r->ratio <= 5.0);
  CHECK(r->within_bound);
  CHECK(r->cells == std::vector<RegionId>{0, 5});
  CHECK(r->boundary.vertices.front() == 0);
  CHECK(r->boundary.vertices.back() == 5);
}

TEST_CASE("boundary route: unreachable target gives no route") {
  // 2 reaches the seed through 1, but nothing reaches 2.
  const std::vector<Arc> arcs{{0, 1, 1.0}, {1, 0, 1.0}, {2, 1, 1.0}};
  const Digraph g(3, arcs);
  const auto cells = compute_boundary_cells(g, RegionSeedSet({0}, 3));
  const auto dual = build_boundary_dual_graph(g, cells);
  CHECK_FALSE(boundary_route(g, cells, dual, 0, 2).has_value());
  CHECK(boundary_route(g, cells, dual, 2, 0).has_value());
}

TEST_CASE("stretch: seed-pair routes respect l(P*) <= e l(P) on hop cells") {
  std::size_t routes = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto gg = unit_disk(10 + static_cast<std::uint32_t>(seed % 5) * 8, seed);
    const std::size_t n = gg.graph.size();
    const auto seeds = random_seeds(n, 2 + seed % 4, seed + 77);
    const auto cells = compute_boundary_cells(gg.graph, RegionSeedSet(seeds, n));
    const auto dual = build_boundary_dual_graph(gg.graph, cells);
    for (Vertex s : seeds) {
      for (Vertex t : seeds) {
        if (s == t) continue;
        const auto r = boundary_route(gg.graph, cells, dual, s, t);
        REQUIRE(r.has_value());
        ++routes;
        const double e = static_cast<double>(r->direct.hop_count());
        CHECK(r->boundary.length <= e * r->direct.length);
        CHECK(r->within_bound);
        CHECK(path_length(gg.graph, r->boundary.vertices) == doctest::Approx(r->boundary.length));
      }
    }
  }
  CHECK(routes > 200);
}

TEST_CASE("stretch: weighted cells on Euclidean graphs") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto gg = unit_disk(20, seed, WeightMode::Euclidean);
    const auto seeds = random_seeds(20, 2 + seed % 3, seed + 5);
    const auto cells = compute_boundary_cells(gg.graph, RegionSeedSet(seeds, 20), CellMetric::Weighted);
    const auto dual = build_boundary_dual_graph(gg.graph, cells);
    for (Vertex s : seeds) {
      for (Vertex t : seeds) {
        if (s == t) continue;
        const auto r = boundary_route(gg.graph, cells, dual, s, t);
        REQUIRE(r.has_value());
        const double e = static_cast<double>(r->direct.hop_count());
        CHECK(r->boundary.length <= e * r->direct.length * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("tightness: closed-form ratios") {
  auto measured = [](int e, double m, double eps) {
    const auto inst = worst_case_construction(e, m, eps);
    const auto cells = compute_boundary_cells(inst.graph, inst.seeds, inst.metric);
    const auto dual = build_boundary_dual_graph(inst.graph, cells);
    const auto r = boundary_route(inst.graph, cells, dual, inst.source, inst.target);
    REQUIRE(r.has_value());
    CHECK(r->direct.hop_count() == static_cast<std::size_t>(e));
    CHECK(r->direct.length == doctest::Approx(2 * m + (e - 2) * eps).epsilon(1e-12));
    return r->ratio;
  };
  CHECK(measured(2, 1.0, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(measured(4, 1.0, 0.01) == doctest::Approx(7.96 / 2.02).epsilon(1e-12));
  CHECK(measured(4, 1.0, 0.01) == doctest::Approx(3.9406).epsilon(1e-4));

  for (int e : {2, 4, 8}) {
    double previous = 0.0;
    for (double eps : {0.1, 0.01, 0.001}) {
      const double r = measured(e, 1.0, eps);
      CHECK(r == doctest::Approx(oracle::tightness_ratio(e, 1.0, eps)).epsilon(1e-9));
      CHECK(r > previous);
      CHECK(r < e);
      previous = r;
    }
    CHECK(e - previous < 0.01 * e);
  }
}

TEST_CASE("tightness: invalid parameters are rejected") {
  CHECK_THROWS_AS(worst_case_construction(4, 1.0, 1.0), Error);
  CHECK_THROWS_AS(worst_case_construction(4, 1.0, 2.0), Error);
  CHECK_THROWS_AS(worst_case_construction(4, 1.0, 0.0), Error);
  CHECK_THROWS_AS(worst_case_construction(1, 1.0, 0.1), Error);
}
