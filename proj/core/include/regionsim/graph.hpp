#pragma once

// Communication digraph over deployed sensor nodes and the distance queries
// the rest of the library is built on.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace regionsim {

/// External node identifier, unique within a deployment.
using NodeId = std::uint32_t;

/// Dense vertex index into a Digraph. Vertex order follows NodeId order, so
/// comparing vertices compares node ids.
using Vertex = std::uint32_t;

struct NodePos {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  double radio_range = 0.0;
  bool is_boundary_node = false;
  std::optional<int> region_id;
};

double euclidean_distance(const NodePos& a, const NodePos& b);

enum class WeightMode { Euclidean, Unit };

struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  double weight = 0.0;
};

/// Arc expressed in external node ids, used when constructing a Digraph.
struct IdArc {
  NodeId from = 0;
  NodeId to = 0;
  double weight = 1.0;
};

/**
 * Immutable weighted digraph D = (V, A).
 *
 * Arcs are stored twice (by tail and by head) so both in- and out-neighborhoods
 * are contiguous spans sorted by the opposite endpoint. Self-loops, duplicate
 * arcs and non-positive weights are rejected at construction.
 */
class Digraph {
 public:
  Digraph() = default;

  /// Vertices 0..n-1 with node ids equal to their index.
  Digraph(std::size_t vertex_count, std::span<const Arc> arcs);

  static Digraph from_ids(std::vector<NodeId> ids, std::span<const IdArc> arcs);

  std::size_t size() const { return ids_.size(); }
  std::size_t arc_count() const { return out_arcs_.size(); }

  NodeId id(Vertex v) const;
  std::optional<Vertex> find(NodeId id) const;
  Vertex vertex(NodeId id) const;  // throws on unknown id
  bool contains(Vertex v) const { return v < size(); }
  void require(Vertex v) const;    // throws on unknown vertex

  std::span<const Arc> out_arcs(Vertex v) const;
  std::span<const Arc> in_arcs(Vertex v) const;
  std::span<const Arc> arcs() const { return out_arcs_; }

  std::optional<double> arc_weight(Vertex from, Vertex to) const;
  bool has_arc(Vertex from, Vertex to) const { return arc_weight(from, to).has_value(); }
  bool is_symmetric() const;

  /// Subgraph induced by `keep`; node ids are preserved.
  Digraph induced(std::span<const Vertex> keep) const;

  /// Same topology with every weight replaced by `reweight(arc)`.
  Digraph reweighted(const std::function<double(const Arc&)>& reweight) const;

 private:
  void build(std::vector<Arc> arcs);

  std::vector<NodeId> ids_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Arc> in_arcs_;
};

/// Arc (u,v) exists iff dist(u,v) <= u.radio_range. With `symmetric`, an arc
/// pair is added only when both ranges cover the distance.
Digraph build_unit_disk_digraph(std::span<const NodePos> nodes, bool symmetric,
                                WeightMode mode = WeightMode::Euclidean);

/// Adds an independent uniform draw from (0, epsilon) to every arc weight.
/// Restores uniqueness of shortest paths when ties must be broken at random.
Digraph perturb_weights(const Digraph& g, std::uint64_t seed, double epsilon);

struct Neighborhood {
  std::vector<Vertex> in;   // {u : (u,v) in A}
  std::vector<Vertex> out;  // {u : (v,u) in A}
  std::vector<Vertex> all;  // in ∪ out
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
};

Neighborhood neighborhoods(const Digraph& g, Vertex v);

using Hops = std::optional<std::uint32_t>;

Hops hop_distance(const Digraph& g, Vertex from, Vertex to);
std::vector<Hops> hops_from(const Digraph& g, Vertex source);
std::vector<Hops> hops_to(const Digraph& g, Vertex target);
std::vector<Hops> multi_source_hops(const Digraph& g, std::span<const Vertex> sources);

using ArcCost = std::function<double(const Arc&)>;

/// Optional knobs for weighted searches: a replacement arc cost and a vertex
/// filter. Both default to "use the arc weight" and "admit everything".
struct PathQuery {
  ArcCost cost;
  std::function<bool(Vertex)> admit;
};

struct PathResult {
  std::vector<Vertex> vertices;
  double length = 0.0;  // sum of arc weights
  double cost = 0.0;    // sum of query costs; equals length for plain queries

  std::size_t hop_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

using Distances = std::vector<std::optional<double>>;

Distances distances_from(const Digraph& g, Vertex source, const PathQuery& query = {});
Distances distances_to(const Digraph& g, Vertex target, const PathQuery& query = {});

/// Minimum-cost path; among equal-cost paths the lexicographically smallest
/// vertex sequence. Empty optional means unreachable.
std::optional<PathResult> shortest_path(const Digraph& g, Vertex from, Vertex to,
                                        const PathQuery& query = {});

/// min over sources x, targets y of S(x, y). Both sets must be nonempty.
std::optional<double> set_distance(const Digraph& g, std::span<const Vertex> sources,
                                   std::span<const Vertex> targets,
                                   const PathQuery& query = {});
std::optional<double> set_distance(const Digraph& g, Vertex source,
                                   std::span<const Vertex> targets,
                                   const PathQuery& query = {});

/// Sum of weights along `path`; throws if two consecutive vertices are not joined.
double path_length(const Digraph& g, std::span<const Vertex> path);

}  // namespace regionsim
