#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace interlace {

using VertexId = std::uint32_t;

enum class GraphErrc {
  MalformedLine,
  MissingHeader,
  UnknownDirective,
  VertexOutOfRange,
  SelfLoop,
  NonpositiveWeight,
  ConflictingWeight,
  Disconnected,
  InvalidBoundary,
  InvalidArgument,
};

const char* to_string(GraphErrc code) noexcept;

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& message, std::size_t line = 0);

  GraphErrc code() const noexcept { return code_; }
  // 1-based line of the offending directive, 0 when not parsing a document.
  std::size_t line() const noexcept { return line_; }

 private:
  GraphErrc code_;
  std::size_t line_;
};

struct Edge {
  VertexId from;
  VertexId to;
  double weight;
};

// Relative tolerance for weight comparisons and mu consistency.
inline constexpr double kWeightTolerance = 1e-12;

// Connected undirected graph with symmetric positive conductances.
//
// Adjacency is stored CSR-style with sorted neighbor lists. Each vertex also
// carries the cumulative transition probabilities q(x, .) so a step of the
// random walk is a binary search over deg(x) entries.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Validates weights, merges duplicate edges with equal weight, rejects
  // conflicting duplicates, self-loops and disconnected input.
  static WeightedGraph from_edges(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t size() const noexcept { return mu_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  std::size_t degree(VertexId x) const noexcept { return offsets_[x + 1] - offsets_[x]; }

  std::span<const VertexId> neighbors(VertexId x) const noexcept {
    return {neighbors_.data() + offsets_[x], degree(x)};
  }
  std::span<const double> weights(VertexId x) const noexcept {
    return {weights_.data() + offsets_[x], degree(x)};
  }

  double mu(VertexId x) const noexcept { return mu_[x]; }
  // a_{x,y}, or 0 when x and y are not adjacent.
  double weight(VertexId x, VertexId y) const noexcept;
  bool adjacent(VertexId x, VertexId y) const noexcept { return weight(x, y) > 0.0; }

  // Neighbor chosen with probability q(x, y) = a_{x,y} / mu_x, for uniform in [0, 1).
  VertexId sample_neighbor(VertexId x, double uniform) const noexcept;

  // Every stored edge exactly once, from < to.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<double> mu_;
};

// Membership mask plus the sorted member list of a vertex subset.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::size_t universe, std::span<const VertexId> members);
  VertexSet(std::size_t universe, std::initializer_list<VertexId> members)
      : VertexSet(universe, std::span<const VertexId>(members.begin(), members.size())) {}

  bool contains(VertexId x) const noexcept { return x < mask_.size() && mask_[x] != 0; }
  std::span<const VertexId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t universe() const noexcept { return mask_.size(); }

  VertexSet united(const VertexSet& other) const;

 private:
  std::vector<char> mask_;
  std::vector<VertexId> members_;
};

enum class BoundaryKind { Kill, GeometricReturn };

// Finite observation region of a (conceptually infinite) transient graph.
//
// A walk standing on a boundary vertex b continues with probability
// return_probability(b) and otherwise escapes for good. When it continues, its
// next step uses the window transitions from b. A return probability of zero
// is the Kill model.
class Window {
 public:
  Window() = default;
  // boundary[i] has return probability return_probability[i] in [0, 1).
  Window(WeightedGraph graph, std::vector<VertexId> boundary,
         std::vector<double> return_probability, std::string label = {});

  const WeightedGraph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }
  const std::string& label() const noexcept { return label_; }

  std::span<const VertexId> interior() const noexcept { return interior_; }
  std::span<const VertexId> boundary() const noexcept { return boundary_; }
  bool is_boundary(VertexId x) const noexcept { return boundary_mask_[x] != 0; }
  // Probability that a walk at x takes another step: 1 off the boundary,
  // the return probability on it.
  double continuation(VertexId x) const noexcept { return continuation_[x]; }
  // Interior vertex with at least one boundary neighbor.
  bool touches_boundary(VertexId x) const noexcept { return touches_[x] != 0; }

  BoundaryKind boundary_kind() const noexcept;
  VertexSet interior_set() const { return VertexSet(size(), interior_); }

  // Builders record the radius they were asked for.
  std::optional<int> radius;

 private:
  WeightedGraph graph_;
  std::vector<VertexId> interior_;
  std::vector<VertexId> boundary_;
  std::vector<char> boundary_mask_;
  std::vector<double> continuation_;
  std::vector<char> touches_;
  std::string label_;
};

// Graph distance from `source` to every vertex (unreachable: -1).
std::vector<int> bfs_distances(const WeightedGraph& graph, VertexId source);

}  // namespace interlace
