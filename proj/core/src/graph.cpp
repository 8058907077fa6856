#include "regionsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "regionsim/error.hpp"

namespace regionsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::Io: return "i/o";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

double euclidean_distance(const NodePos& a, const NodePos& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

// Relative tolerance used when deciding whether two float path costs tie.
constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

double arc_cost(const PathQuery& query, const Arc& arc) {
  return query.cost ? query.cost(arc) : arc.weight;
}

bool admitted(const PathQuery& query, Vertex v) { return !query.admit || query.admit(v); }

}  // namespace

Digraph::Digraph(std::size_t vertex_count, std::span<const Arc> arcs) {
  ids_.resize(vertex_count);
  std::iota(ids_.begin(), ids_.end(), NodeId{0});
  build(std::vector<Arc>(arcs.begin(), arcs.end()));
}

Digraph Digraph::from_ids(std::vector<NodeId> ids, std::span<const IdArc> arcs) {
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(ErrorKind::InvalidInput, "duplicate node id " + std::to_string(*dup));
  }
  Digraph g;
  g.ids_ = std::move(ids);
  std::vector<Arc> mapped;
  mapped.reserve(arcs.size());
  for (const auto& a : arcs) {
    mapped.push_back(Arc{g.vertex(a.from), g.vertex(a.to), a.weight});
  }
  g.build(std::move(mapped));
  return g;
}

void Digraph::build(std::vector<Arc> arcs) {
  const std::size_t n = ids_.size();
  for (const auto& a : arcs) {
    if (a.from >= n || a.to >= n) {
      throw Error(ErrorKind::InvalidInput, "arc endpoint outside vertex set");
    }
    if (a.from == a.to) {
      throw Error(ErrorKind::InvalidInput, "self-loop at node " + std::to_string(ids_[a.from]));
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorKind::InvalidInput, "arc weights must be positive and finite");
    }
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  auto dup = std::adjacent_find(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return a.from == b.from && a.to == b.to;
  });
  if (dup != arcs.end()) {
    throw Error(ErrorKind::InvalidInput, "duplicate arc " + std::to_string(ids_[dup->from]) +
                                             "->" + std::to_string(ids_[dup->to]));
  }

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const auto& a : arcs) {
    ++out_offsets_[a.from + 1];
    ++in_offsets_[a.to + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());

  out_arcs_ = arcs;
  in_arcs_ = std::move(arcs);
  std::stable_sort(in_arcs_.begin(), in_arcs_.end(), [](const Arc& a, const Arc& b) {
    return a.to != b.to ? a.to < b.to : a.from < b.from;
  });
}

NodeId Digraph::id(Vertex v) const {
  require(v);
  return ids_[v];
}

std::optional<Vertex> Digraph::find(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Vertex>(it - ids_.begin());
}

Vertex Digraph::vertex(NodeId id) const {
  if (auto v = find(id)) return *v;
  throw Error(ErrorKind::InvalidInput, "unknown node id " + std::to_string(id));
}

void Digraph::require(Vertex v) const {
  if (v >= size()) {
    throw Error(ErrorKind::InvalidInput, "unknown vertex " + std::to_string(v));
  }
}

std::span<const Arc> Digraph::out_arcs(Vertex v) const {
  require(v);
  return {out_arcs_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const Arc> Digraph::in_arcs(Vertex v) const {
  require(v);
  return {in_arcs_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

std::optional<double> Digraph::arc_weight(Vertex from, Vertex to) const {
  auto out = out_arcs(from);
  auto it = std::lower_bound(out.begin(), out.end(), to,
                             [](const Arc& a, Vertex v) { return a.to < v; });
  if (it == out.end() || it->to != to) return std::nullopt;
  return it->weight;
}

bool Digraph::is_symmetric() const {
  return std::all_of(out_arcs_.begin(), out_arcs_.end(),
                     [this](const Arc& a) { return has_arc(a.to, a.from); });
}

Digraph Digraph::induced(std::span<const Vertex> keep) const {
  std::vector<Vertex> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> remap(size(), kAbsent);
  Digraph sub;
  sub.ids_.reserve(sorted.size());
  for (Vertex v : sorted) {
    require(v);
    remap[v] = static_cast<Vertex>(sub.ids_.size());
    sub.ids_.push_back(ids_[v]);
  }
  std::vector<Arc> arcs;
  for (const auto& a : out_arcs_) {
    if (remap[a.from] != kAbsent && remap[a.to] != kAbsent) {
      arcs.push_back(Arc{remap[a.from], remap[a.to], a.weight});
    }
  }
  sub.build(std::move(arcs));
  return sub;
}

Digraph Digraph::reweighted(const std::function<double(const Arc&)>& reweight) const {
  Digraph g;
  g.ids_ = ids_;
  std::vector<Arc> arcs = out_arcs_;
  for (auto& a : arcs) a.weight = reweight(a);
  g.build(std::move(arcs));
  return g;
}

Digraph build_unit_disk_digraph(std::span<const NodePos> nodes, bool symmetric, WeightMode mode) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidInput, "node list is empty");
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (!(n.radio_range > 0.0)) {
      throw Error(ErrorKind::InvalidInput,
                  "node " + std::to_string(n.id) + " has non-positive radio range");
    }
    ids.push_back(n.id);
  }
  std::vector<IdArc> arcs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      const double d = euclidean_distance(nodes[i], nodes[j]);
      bool covered = d <= nodes[i].radio_range;
      if (symmetric) covered = covered && d <= nodes[j].radio_range;
      if (!covered) continue;
      // Coincident nodes still get a usable (tiny) weight.
      const double w = mode == WeightMode::Unit ? 1.0 : std::max(d, 1e-9);
      arcs.push_back(IdArc{nodes[i].id, nodes[j].id, w});
    }
  }
  return Digraph::from_ids(std::move(ids), arcs);
}

Digraph perturb_weights(const Digraph& g, std::uint64_t seed, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidInput, "perturbation epsilon must be > 0");
  // Weights are drawn in arc order, which is fixed by the (from, to) sort.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, epsilon);
  return g.reweighted([&](const Arc& a) { return a.weight + jitter(rng); });
}

Neighborhood neighborhoods(const Digraph& g, Vertex v) {
  g.require(v);
  Neighborhood n;
  for (const auto& a : g.in_arcs(v)) n.in.push_back(a.from);
  for (const auto& a : g.out_arcs(v)) n.out.push_back(a.to);
  std::set_union(n.in.begin(), n.in.end(), n.out.begin(), n.out.end(), std::back_inserter(n.all));
  n.in_degree = n.in.size();
  n.out_degree = n.out.size();
  return n;
}

namespace {

std::vector<Hops> bfs(const Digraph& g, std::span<const Vertex> sources, bool reverse) {
  std::vector<Hops> dist(g.size());
  std::deque<Vertex> frontier;
  for (Vertex s : sources) {
    g.require(s);
    if (!dist[s]) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop_front();
    const auto next = *dist[u] + 1;
    for (const auto& a : reverse ? g.in_arcs(u) : g.out_arcs(u)) {
      const Vertex w = reverse ? a.from : a.to;
      if (!dist[w]) {
        dist[w] = next;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

Distances dijkstra(const Digraph& g, Vertex root, const PathQuery& query, bool reverse) {
  g.require(root);
  Distances dist(g.size());
  if (!admitted(query, root)) return dist;
  using Entry = std::pair<double, Vertex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<bool> settled(g.size(), false);
  dist[root] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    for (const auto& a : reverse ? g.in_arcs(u) : g.out_arcs(u)) {
      const Vertex w = reverse ? a.from : a.to;
      if (settled[w] || !admitted(query, w)) continue;
      const double c = arc_cost(query, a);
      if (!(c > 0.0)) throw Error(ErrorKind::InvalidInput, "arc costs must be positive");
      const double nd = d + c;
      if (!dist[w] || nd < *dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

}  // namespace

Hops hop_distance(const Digraph& g, Vertex from, Vertex to) {
  g.require(to);
  return hops_from(g, from)[to];
}

std::vector<Hops> hops_from(const Digraph& g, Vertex source) {
  const Vertex s[] = {source};
  return bfs(g, s, false);
}

std::vector<Hops> hops_to(const Digraph& g, Vertex target) {
  const Vertex t[] = {target};
  return bfs(g, t, true);
}

std::vector<Hops> multi_source_hops(const Digraph& g, std::span<const Vertex> sources) {
  return bfs(g, sources, false);
}

Distances distances_from(const Digraph& g, Vertex source, const PathQuery& query) {
  return dijkstra(g, source, query, false);
}

Distances distances_to(const Digraph& g, Vertex target, const PathQuery& query) {
  return dijkstra(g, target, query, true);
}

std::optional<PathResult> shortest_path(const Digraph& g, Vertex from, Vertex to,
                                        const PathQuery& query) {
  g.require(from);
  g.require(to);
  if (!admitted(query, from) || !admitted(query, to)) return std::nullopt;
  if (from == to) return PathResult{{from}, 0.0, 0.0};

  // Distances toward `to`, then a greedy walk taking the smallest-id successor
  // that stays on some shortest path. That yields the lexicographically
  // smallest vertex sequence among all minimum-cost paths.
  const Distances to_target = distances_to(g, to, query);
  if (!to_target[from]) return std::nullopt;

  PathResult path;
  path.vertices.push_back(from);
  Vertex u = from;
  while (u != to) {
    if (path.vertices.size() > g.size()) {
      throw Error(ErrorKind::Internal, "shortest path reconstruction did not terminate");
    }
    const double remaining = *to_target[u];
    const Arc* chosen = nullptr;
    for (const auto& a : g.out_arcs(u)) {
      if (!to_target[a.to] || !admitted(query, a.to)) continue;
      const double c = arc_cost(query, a);
      if (*to_target[a.to] < remaining && nearly_equal(c + *to_target[a.to], remaining)) {
        chosen = &a;
        break;
      }
    }
    if (chosen == nullptr) {
      throw Error(ErrorKind::Internal, "no shortest-path successor found");
    }
    path.length += chosen->weight;
    path.cost += arc_cost(query, *chosen);
    u = chosen->to;
    path.vertices.push_back(u);
  }
  return path;
}

std::optional<double> set_distance(const Digraph& g, std::span<const Vertex> sources,
                                   std::span<const Vertex> targets, const PathQuery& query) {
  if (sources.empty()) throw Error(ErrorKind::InvalidInput, "source set is empty");
  if (targets.empty()) throw Error(ErrorKind::InvalidInput, "target set is empty");
  for (Vertex t : targets) g.require(t);
  std::optional<double> best;
  for (Vertex s : sources) {
    const Distances d = distances_from(g, s, query);
    for (Vertex t : targets) {
      if (d[t] && (!best || *d[t] < *best)) best = d[t];
    }
  }
  return best;
}

std::optional<double> set_distance(const Digraph& g, Vertex source,
                                   std::span<const Vertex> targets, const PathQuery& query) {
  const Vertex s[] = {source};
  return set_distance(g, s, targets, query);
}

double path_length(const Digraph& g, std::span<const Vertex> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto w = g.arc_weight(path[i - 1], path[i]);
    if (!w) {
      throw Error(ErrorKind::InvalidInput, "path uses missing arc " +
                                               std::to_string(g.id(path[i - 1])) + "->" +
                                               std::to_string(g.id(path[i])));
    }
    total += *w;
  }
  return total;
}

}  // namespace regionsim
