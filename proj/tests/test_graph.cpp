#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "regionsim/error.hpp"
#include "regionsim/graph.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace regionsim;

namespace {

NodePos at(NodeId id, double x, double y, double range) {
  NodePos p;
  p.id = id;
  p.x = x;
  p.y = y;
  p.radio_range = range;
  return p;
}

std::vector<oracle::Pos> positions(const std::vector<NodePos>& nodes) {
  std::vector<oracle::Pos> out;
  for (const auto& n : nodes) out.push_back({n.x, n.y, n.radio_range});
  return out;
}

bool same_arcs(const Digraph& g, std::vector<oracle::WArc> expected) {
  auto got = gen::arcs_of(g);
  auto key = [](const oracle::WArc& a) { return std::pair(a.from, a.to); };
  std::sort(got.begin(), got.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  std::sort(expected.begin(), expected.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  if (got.size() != expected.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (key(got[i]) != key(expected[i]) || std::abs(got[i].w - expected[i].w) > 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("unit disk: nodes within range are joined both ways with distance weight") {
  const std::vector<NodePos> nodes{at(0, 0, 0, 15), at(1, 10, 0, 15)};
  const Digraph g = build_unit_disk_digraph(nodes, true);
  CHECK(g.arc_count() == 2);
  CHECK(g.arc_weight(0, 1) == doctest::Approx(10.0));
  CHECK(g.arc_weight(1, 0) == doctest::Approx(10.0));
}

TEST_CASE("unit disk: nodes beyond range are not joined") {
  const std::vector<NodePos> nodes{at(0, 0, 0, 15), at(1, 20, 0, 15)};
  CHECK(build_unit_disk_digraph(nodes, true).arc_count() == 0);
}

TEST_CASE("unit disk: 5x5 lattice at 40 m with 45 m range is the 4-neighbor lattice") {
  std::vector<NodePos> nodes;
  for (NodeId i = 0; i < 25; ++i) nodes.push_back(at(i, 40.0 * (i % 5), 40.0 * (i / 5), 45));
  const Digraph g = build_unit_disk_digraph(nodes, true);
  CHECK(g.arc_count() == 80);
  CHECK(same_arcs(g, oracle::unit_disk_arcs(positions(nodes), true, false)));
}

TEST_CASE("unit disk: random placements match the brute-force pair check") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0, 100), range(10, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<NodePos> nodes;
    for (NodeId i = 0; i < 30; ++i) nodes.push_back(at(i, coord(rng), coord(rng), range(rng)));
    for (bool symmetric : {true, false}) {
      for (WeightMode mode : {WeightMode::Euclidean, WeightMode::Unit}) {
        const Digraph g = build_unit_disk_digraph(nodes, symmetric, mode);
        CHECK(same_arcs(g, oracle::unit_disk_arcs(positions(nodes), symmetric, mode == WeightMode::Unit)));
        if (symmetric) CHECK(g.is_symmetric());
      }
    }
  }
}

TEST_CASE("unit disk: asymmetric ranges give a one-way arc unless symmetric is requested") {
  const std::vector<NodePos> nodes{at(0, 0, 0, 30), at(1, 20, 0, 10)};
  const Digraph directed = build_unit_disk_digraph(nodes, false);
  CHECK(directed.has_arc(0, 1));
  CHECK_FALSE(directed.has_arc(1, 0));
  CHECK(build_unit_disk_digraph(nodes, true).arc_count() == 0);
}

TEST_CASE("unit disk: duplicate id is rejected and named") {
  const std::vector<NodePos> nodes{at(4, 0, 0, 15), at(4, 10, 0, 15)};
  try {
    build_unit_disk_digraph(nodes, true);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find('4') != std::string::npos);
  }
}

TEST_CASE("digraph: construction rejects self-loops, duplicate arcs and bad weights") {
  const Arc loop[] = {{0, 0, 1.0}};
  CHECK_THROWS_AS(Digraph(2, loop), Error);
  const Arc dup[] = {{0, 1, 1.0}, {0, 1, 2.0}};
  CHECK_THROWS_AS(Digraph(2, dup), Error);
  const Arc zero[] = {{0, 1, 0.0}};
  CHECK_THROWS_AS(Digraph(2, zero), Error);
  const Arc out_of_range[] = {{0, 5, 1.0}};
  CHECK_THROWS_AS(Digraph(2, out_of_range), Error);
}

TEST_CASE("digraph: ids map to vertices in id order") {
  const IdArc arcs[] = {{30, 10, 1.0}, {10, 20, 2.0}};
  const Digraph g = Digraph::from_ids({30, 10, 20}, arcs);
  CHECK(g.id(0) == 10);
  CHECK(g.id(2) == 30);
  CHECK(g.vertex(20) == 1);
  CHECK_FALSE(g.find(99).has_value());
  CHECK_THROWS_AS(g.vertex(99), Error);
  CHECK(g.arc_weight(g.vertex(30), g.vertex(10)) == 1.0);
}

TEST_CASE("digraph: induced subgraph keeps ids and only inner arcs") {
  const Digraph g = gen::path_graph(5);
  const Vertex keep[] = {1, 2, 4};
  const Digraph sub = g.induced(keep);
  CHECK(sub.size() == 3);
  CHECK(sub.id(2) == 4);
  CHECK(sub.arc_count() == 2);
  CHECK(sub.has_arc(sub.vertex(1), sub.vertex(2)));
  CHECK_FALSE(sub.has_arc(sub.vertex(2), sub.vertex(4)));
}

TEST_CASE("neighborhoods: isolated vertex") {
  const Digraph g(3, std::span<const Arc>{});
  const auto n = neighborhoods(g, 1);
  CHECK(n.in.empty());
  CHECK(n.out.empty());
  CHECK(n.all.empty());
  CHECK(n.in_degree == 0);
  CHECK(n.out_degree == 0);
}

TEST_CASE("neighborhoods: single arc") {
  const Arc arcs[] = {{0, 1, 1.0}};
  const Digraph g(2, arcs);
  const auto n = neighborhoods(g, 1);
  CHECK(n.in == std::vector<Vertex>{0});
  CHECK(n.out.empty());
  CHECK(n.all == std::vector<Vertex>{0});
}

TEST_CASE("neighborhoods: unknown vertex is rejected") {
  const Digraph g = gen::path_graph(3);
  CHECK_THROWS_AS(neighborhoods(g, 3), Error);
}

TEST_CASE("neighborhoods: random digraphs match an arc scan") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rd = gen::random_digraph(15, 0.2, seed, false);
    for (Vertex v = 0; v < 15; ++v) {
      std::set<Vertex> in, out;
      for (const auto& a : rd.arcs) {
        if (a.to == v) in.insert(a.from);
        if (a.from == v) out.insert(a.to);
      }
      std::set<Vertex> all(in);
      all.insert(out.begin(), out.end());
      const auto n = neighborhoods(rd.graph, v);
      CHECK(n.in == std::vector<Vertex>(in.begin(), in.end()));
      CHECK(n.out == std::vector<Vertex>(out.begin(), out.end()));
      CHECK(n.all == std::vector<Vertex>(all.begin(), all.end()));
      CHECK(n.in_degree == in.size());
      CHECK(n.out_degree == out.size());
      // |Γ| <= deg- + deg+, with equality exactly when the sets are disjoint.
      const bool disjoint = all.size() == in.size() + out.size();
      CHECK(n.all.size() <= n.in_degree + n.out_degree);
      CHECK((n.all.size() == n.in_degree + n.out_degree) == disjoint);
    }
  }
}

TEST_CASE("hop distance: self is zero, path is forced") {
  const Arc arcs[] = {{0, 1, 1.0}, {1, 2, 1.0}};
  const Digraph g(3, arcs);
  CHECK(hop_distance(g, 1, 1) == 0u);
  CHECK(hop_distance(g, 0, 2) == 2u);
  CHECK_FALSE(hop_distance(g, 2, 0).has_value());
  CHECK_THROWS_AS(hop_distance(g, 0, 7), Error);
}

TEST_CASE("hop distance: random digraphs match all-pairs BFS") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rd = gen::random_digraph(20, 0.12, seed, true);
    const auto oracle = oracle::bfs_all_pairs(20, rd.arcs);
    for (Vertex u = 0; u < 20; ++u) {
      const auto from = hops_from(rd.graph, u);
      const auto to = hops_to(rd.graph, u);
      for (Vertex v = 0; v < 20; ++v) {
        CHECK(hop_distance(rd.graph, u, v) == oracle[u][v]);
        CHECK(from[v] == oracle[u][v]);
        CHECK(to[v] == oracle[v][u]);
      }
    }
  }
}

TEST_CASE("shortest path: trivial and unreachable cases") {
  const Arc arcs[] = {{0, 1, 2.0}, {2, 3, 1.0}};
  const Digraph g(4, arcs);
  const auto self = shortest_path(g, 1, 1);
  REQUIRE(self);
  CHECK(self->length == 0.0);
  CHECK(self->hop_count() == 0);
  CHECK_FALSE(shortest_path(g, 0, 3).has_value());
  CHECK_FALSE(distances_from(g, 0)[3].has_value());
  CHECK_THROWS_AS(shortest_path(g, 0, 9), Error);
}

TEST_CASE("shortest path: random weighted digraphs match Floyd-Warshall") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rd = gen::random_digraph(20, 0.15, seed, true);
    const auto fw = oracle::floyd_warshall(20, rd.arcs);
    for (Vertex u = 0; u < 20; ++u) {
      const auto d = distances_from(rd.graph, u);
      for (Vertex v = 0; v < 20; ++v) {
        REQUIRE(d[v].has_value() == fw[u][v].has_value());
        const auto p = shortest_path(rd.graph, u, v);
        REQUIRE(p.has_value() == fw[u][v].has_value());
        if (!p) continue;
        CHECK(p->length == doctest::Approx(*fw[u][v]).epsilon(1e-12));
        CHECK(*d[v] == doctest::Approx(*fw[u][v]).epsilon(1e-12));
        CHECK(path_length(rd.graph, p->vertices) == doctest::Approx(p->length));
        CHECK(p->vertices.front() == u);
        CHECK(p->vertices.back() == v);
      }
    }
  }
}

TEST_CASE("shortest path: ties resolve to the lexicographically smallest sequence") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto rd = gen::random_tie_digraph(8, 0.35, seed);
    for (Vertex u = 0; u < 8; ++u) {
      for (Vertex v = 0; v < 8; ++v) {
        if (u == v) continue;
        const auto best =
            oracle::exhaustive_best_path(8, rd.arcs, u, v, [](const oracle::WArc& a) { return a.w; });
        const auto p = shortest_path(rd.graph, u, v);
        REQUIRE(p.has_value() == !best.path.empty());
        if (p) CHECK(p->vertices == best.path);
      }
    }
  }
}

TEST_CASE("shortest path: triangle inequality and unit-weight agreement with hops") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto weighted = gen::random_digraph(15, 0.2, seed, true);
    const auto unit = gen::random_digraph(15, 0.2, seed + 100, false);
    for (Vertex x = 0; x < 15; ++x) {
      const auto dx = distances_from(weighted.graph, x);
      for (Vertex y = 0; y < 15; ++y) {
        if (!dx[y]) continue;
        const auto dy = distances_from(weighted.graph, y);
        for (Vertex z = 0; z < 15; ++z) {
          if (dy[z]) CHECK(*dx[z] <= *dx[y] + *dy[z] + 1e-9);
        }
      }
      const auto hops = hops_from(unit.graph, x);
      const auto lengths = distances_from(unit.graph, x);
      for (Vertex y = 0; y < 15; ++y) {
        REQUIRE(hops[y].has_value() == lengths[y].has_value());
        if (hops[y]) CHECK(static_cast<double>(*hops[y]) == *lengths[y]);
      }
    }
  }
}

TEST_CASE("set distance: membership, single route and exhaustive minimum") {
  const Arc arcs[] = {{0, 1, 2.0}, {1, 2, 3.0}};
  const Digraph g(3, arcs);
  const Vertex has_self[] = {0, 2};
  CHECK(set_distance(g, 0, has_self) == 0.0);
  const Vertex c[] = {2};
  CHECK(set_distance(g, 0, c) == 5.0);
  CHECK_THROWS_AS(set_distance(g, 0, std::span<const Vertex>{}), Error);
  CHECK_THROWS_AS(set_distance(g, std::span<const Vertex>{}, c), Error);

  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto rd = gen::random_digraph(12, 0.2, seed, true);
    const auto fw = oracle::floyd_warshall(12, rd.arcs);
    std::vector<Vertex> all(12);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const std::vector<Vertex> xs(all.begin(), all.begin() + 3);
    const std::vector<Vertex> ys(all.begin() + 3, all.begin() + 6);
    std::optional<double> best;
    for (Vertex x : xs) {
      for (Vertex y : ys) {
        if (fw[x][y] && (!best || *fw[x][y] < *best)) best = fw[x][y];
      }
    }
    const auto got = set_distance(rd.graph, xs, ys);
    REQUIRE(got.has_value() == best.has_value());
    if (got) CHECK(*got == doctest::Approx(*best).epsilon(1e-12));
  }
}

TEST_CASE("perturbation: deterministic and bounded by epsilon") {
  const auto rd = gen::random_digraph(12, 0.3, 5, false);
  const Digraph a = perturb_weights(rd.graph, 9, 1e-3);
  const Digraph b = perturb_weights(rd.graph, 9, 1e-3);
  const auto pa = a.arcs(), pb = b.arcs(), base = rd.graph.arcs();
  REQUIRE(pa.size() == base.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].weight == pb[i].weight);
    CHECK(pa[i].weight > base[i].weight);
    CHECK(pa[i].weight < base[i].weight + 1e-3);
  }
}
