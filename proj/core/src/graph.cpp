#include "interlace/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace interlace {

const char* to_string(GraphErrc code) noexcept {
  switch (code) {
    case GraphErrc::MalformedLine: return "MalformedLine";
    case GraphErrc::MissingHeader: return "MissingHeader";
    case GraphErrc::UnknownDirective: return "UnknownDirective";
    case GraphErrc::VertexOutOfRange: return "VertexOutOfRange";
    case GraphErrc::SelfLoop: return "SelfLoop";
    case GraphErrc::NonpositiveWeight: return "NonpositiveWeight";
    case GraphErrc::ConflictingWeight: return "ConflictingWeight";
    case GraphErrc::Disconnected: return "Disconnected";
    case GraphErrc::InvalidBoundary: return "InvalidBoundary";
    case GraphErrc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

GraphError::GraphError(GraphErrc code, const std::string& message, std::size_t line)
    : std::runtime_error(message), code_(code), line_(line) {}

namespace {

bool weights_agree(double a, double b) {
  return std::abs(a - b) <= kWeightTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
  if (vertex_count == 0) {
    throw GraphError(GraphErrc::InvalidArgument, "graph needs at least one vertex");
  }
  if (vertex_count > std::numeric_limits<VertexId>::max()) {
    throw GraphError(GraphErrc::InvalidArgument, "too many vertices");
  }

  // Directed copies of every edge, sorted by (from, to), duplicates merged.
  std::vector<Edge> arcs;
  arcs.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.from >= vertex_count || e.to >= vertex_count) {
      std::ostringstream msg;
      msg << "edge " << e.from << "-" << e.to << " references a vertex >= " << vertex_count;
      throw GraphError(GraphErrc::VertexOutOfRange, msg.str());
    }
    if (e.from == e.to) {
      throw GraphError(GraphErrc::SelfLoop, "self-loop at vertex " + std::to_string(e.from));
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      std::ostringstream msg;
      msg << "edge " << e.from << "-" << e.to << " has nonpositive weight " << e.weight;
      throw GraphError(GraphErrc::NonpositiveWeight, msg.str());
    }
    arcs.push_back(e);
    arcs.push_back({e.to, e.from, e.weight});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  std::vector<Edge> unique;
  unique.reserve(arcs.size());
  for (const Edge& e : arcs) {
    if (!unique.empty() && unique.back().from == e.from && unique.back().to == e.to) {
      if (!weights_agree(unique.back().weight, e.weight)) {
        std::ostringstream msg;
        msg << "edge " << std::min(e.from, e.to) << "-" << std::max(e.from, e.to)
            << " given conflicting weights " << unique.back().weight << " and " << e.weight;
        throw GraphError(GraphErrc::ConflictingWeight, msg.str());
      }
      continue;
    }
    unique.push_back(e);
  }

  WeightedGraph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const Edge& e : unique) ++g.offsets_[e.from + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.neighbors_.reserve(unique.size());
  g.weights_.reserve(unique.size());
  for (const Edge& e : unique) {
    g.neighbors_.push_back(e.to);
    g.weights_.push_back(e.weight);
  }

  g.mu_.assign(vertex_count, 0.0);
  g.cumulative_.resize(unique.size());
  for (std::size_t x = 0; x < vertex_count; ++x) {
    const auto w = g.weights(static_cast<VertexId>(x));
    const double mu = std::accumulate(w.begin(), w.end(), 0.0);
    g.mu_[x] = mu;
    double running = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      running += w[i];
      g.cumulative_[g.offsets_[x] + i] = running / mu;
    }
    if (!w.empty()) g.cumulative_[g.offsets_[x + 1] - 1] = 1.0;
  }

  const auto dist = bfs_distances(g, 0);
  const auto unreachable = std::count(dist.begin(), dist.end(), -1);
  if (unreachable > 0) {
    throw GraphError(GraphErrc::Disconnected,
                     std::to_string(unreachable) + " vertices are not reachable from vertex 0");
  }
  return g;
}

double WeightedGraph::weight(VertexId x, VertexId y) const noexcept {
  const auto nb = neighbors(x);
  const auto it = std::lower_bound(nb.begin(), nb.end(), y);
  if (it == nb.end() || *it != y) return 0.0;
  return weights_[offsets_[x] + static_cast<std::size_t>(it - nb.begin())];
}

VertexId WeightedGraph::sample_neighbor(VertexId x, double uniform) const noexcept {
  const double* first = cumulative_.data() + offsets_[x];
  const double* last = cumulative_.data() + offsets_[x + 1];
  const double* it = std::upper_bound(first, last, uniform);
  if (it == last) --it;
  return neighbors_[offsets_[x] + static_cast<std::size_t>(it - first)];
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId x = 0; x < size(); ++x) {
    const auto nb = neighbors(x);
    const auto w = weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (x < nb[i]) out.push_back({x, nb[i], w[i]});
    }
  }
  return out;
}

VertexSet::VertexSet(std::size_t universe, std::span<const VertexId> members)
    : mask_(universe, 0) {
  for (VertexId x : members) {
    if (x >= universe) {
      throw GraphError(GraphErrc::VertexOutOfRange,
                       "vertex " + std::to_string(x) + " outside graph of size " +
                           std::to_string(universe));
    }
    if (!mask_[x]) {
      mask_[x] = 1;
      members_.push_back(x);
    }
  }
  std::sort(members_.begin(), members_.end());
}

VertexSet VertexSet::united(const VertexSet& other) const {
  std::vector<VertexId> all(members_.begin(), members_.end());
  all.insert(all.end(), other.members_.begin(), other.members_.end());
  return VertexSet(std::max(universe(), other.universe()), all);
}

Window::Window(WeightedGraph graph, std::vector<VertexId> boundary,
               std::vector<double> return_probability, std::string label)
    : graph_(std::move(graph)), label_(std::move(label)) {
  const std::size_t n = graph_.size();
  if (boundary.size() != return_probability.size()) {
    throw GraphError(GraphErrc::InvalidArgument, "one return probability per boundary vertex");
  }
  boundary_mask_.assign(n, 0);
  continuation_.assign(n, 1.0);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const VertexId b = boundary[i];
    const double p = return_probability[i];
    if (b >= n) {
      throw GraphError(GraphErrc::VertexOutOfRange,
                       "boundary vertex " + std::to_string(b) + " out of range");
    }
    if (boundary_mask_[b]) {
      throw GraphError(GraphErrc::InvalidBoundary,
                       "boundary vertex " + std::to_string(b) + " declared twice");
    }
    if (!(p >= 0.0 && p < 1.0)) {
      throw GraphError(GraphErrc::InvalidBoundary,
                       "return probability at boundary vertex " + std::to_string(b) +
                           " must lie in [0, 1)");
    }
    boundary_mask_[b] = 1;
    continuation_[b] = p;
  }
  touches_.assign(n, 0);
  for (VertexId x = 0; x < n; ++x) {
    if (boundary_mask_[x]) {
      boundary_.push_back(x);
      continue;
    }
    interior_.push_back(x);
    for (VertexId y : graph_.neighbors(x)) {
      if (boundary_mask_[y]) {
        touches_[x] = 1;
        break;
      }
    }
  }
}

BoundaryKind Window::boundary_kind() const noexcept {
  for (VertexId b : boundary_) {
    if (continuation_[b] > 0.0) return BoundaryKind::GeometricReturn;
  }
  return BoundaryKind::Kill;
}

std::vector<int> bfs_distances(const WeightedGraph& graph, VertexId source) {
  std::vector<int> dist(graph.size(), -1);
  std::queue<VertexId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const VertexId x = frontier.front();
    frontier.pop();
    for (VertexId y : graph.neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
    }
  }
  return dist;
}

}  // namespace interlace
