#include "interlace/builders.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace interlace {

namespace {

constexpr std::size_t kMaxBuilderVertices = 50'000'000;

void require(bool condition, const std::string& message) {
  if (!condition) throw GraphError(GraphErrc::InvalidArgument, message);
}

}  // namespace

Window build_regular_tree(int degree, int radius, double edge_weight) {
  require(degree >= 3, "regular tree needs degree >= 3");
  require(radius >= 1, "regular tree needs radius >= 1");
  require(std::isfinite(edge_weight) && edge_weight > 0.0, "edge weight must be positive");

  std::size_t total = 1;
  std::size_t level_size = 1;
  for (int r = 1; r <= radius; ++r) {
    level_size *= static_cast<std::size_t>(r == 1 ? degree : degree - 1);
    total += level_size;
    require(total <= kMaxBuilderVertices, "regular tree ball too large");
  }

  std::vector<Edge> edges;
  edges.reserve(total - 1);
  std::vector<VertexId> boundary;
  // Breadth-first: vertices of level r occupy [level_begin, level_end).
  VertexId level_begin = 0;
  VertexId level_end = 1;
  VertexId next = 1;
  for (int r = 1; r <= radius; ++r) {
    for (VertexId parent = level_begin; parent < level_end; ++parent) {
      const int children = (r == 1) ? degree : degree - 1;
      for (int c = 0; c < children; ++c) {
        edges.push_back({parent, next, edge_weight});
        if (r == radius) boundary.push_back(next);
        ++next;
      }
    }
    level_begin = level_end;
    level_end = next;
  }

  const double p = 1.0 / (degree - 1);
  std::vector<double> returns(boundary.size(), p);
  Window w(WeightedGraph::from_edges(total, edges), std::move(boundary), std::move(returns),
           "tree(d=" + std::to_string(degree) + ",R=" + std::to_string(radius) + ")");
  w.radius = radius;
  return w;
}

Window build_lattice_ball(int dim, int radius) {
  require(dim >= 3, "lattice ball needs dim >= 3 (Z^1 and Z^2 are recurrent)");
  require(radius >= 1, "lattice ball needs radius >= 1");

  const int side = 2 * radius + 1;
  std::size_t cells = 1;
  for (int k = 0; k < dim; ++k) {
    cells *= static_cast<std::size_t>(side);
    require(cells <= kMaxBuilderVertices, "lattice ball too large");
  }

  // Grid coordinates in [-radius, radius]^dim, flattened with coordinate 0
  // varying fastest.
  auto coords_of = [&](std::size_t cell) {
    std::vector<int> c(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
      c[static_cast<std::size_t>(k)] = static_cast<int>(cell % static_cast<std::size_t>(side)) - radius;
      cell /= static_cast<std::size_t>(side);
    }
    return c;
  };
  auto kind_of = [&](const std::vector<int>& c) {
    // 0: interior, 1: boundary (adjacent to the interior), 2: unused.
    int at_edge = 0;
    for (int v : c) {
      if (std::abs(v) == radius) ++at_edge;
    }
    return at_edge == 0 ? 0 : (at_edge == 1 ? 1 : 2);
  };

  std::vector<std::int64_t> id(cells, -1);
  std::size_t center = 0;
  for (int k = dim - 1; k >= 0; --k) center = center * static_cast<std::size_t>(side) + static_cast<std::size_t>(radius);
  id[center] = 0;
  VertexId next = 1;
  std::vector<VertexId> boundary;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (cell == center) continue;
    const int kind = kind_of(coords_of(cell));
    if (kind == 2) continue;
    id[cell] = next;
    if (kind == 1) boundary.push_back(next);
    ++next;
  }

  const double weight = 1.0 / (2.0 * dim);
  std::vector<Edge> edges;
  std::size_t stride = 1;
  std::vector<std::size_t> strides(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    strides[static_cast<std::size_t>(k)] = stride;
    stride *= static_cast<std::size_t>(side);
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto c = coords_of(cell);
    if (kind_of(c) != 0) continue;
    for (int k = 0; k < dim; ++k) {
      // Interior coordinates are strictly inside, so both neighbors exist.
      const std::size_t s = strides[static_cast<std::size_t>(k)];
      for (std::size_t other : {cell - s, cell + s}) {
        edges.push_back({static_cast<VertexId>(id[cell]), static_cast<VertexId>(id[other]), weight});
      }
    }
  }

  std::vector<double> returns(boundary.size(), 0.0);
  Window w(WeightedGraph::from_edges(next, edges), std::move(boundary), std::move(returns),
           "lattice(dim=" + std::to_string(dim) + ",R=" + std::to_string(radius) + ")");
  w.radius = radius;
  return w;
}

WeightedGraph build_product_with_line(const WeightedGraph& base, int half_height) {
  require(half_height >= 0, "half height must be nonnegative");
  const int levels = 2 * half_height + 1;
  const std::size_t n = base.size() * static_cast<std::size_t>(levels);
  require(n <= kMaxBuilderVertices, "product graph too large");

  std::vector<Edge> edges;
  for (const Edge& e : base.edges()) {
    for (int j = -half_height; j <= half_height; ++j) {
      edges.push_back({product_vertex(e.from, j, half_height), product_vertex(e.to, j, half_height),
                       e.weight});
    }
  }
  for (VertexId x = 0; x < base.size(); ++x) {
    for (int j = -half_height; j < half_height; ++j) {
      edges.push_back({product_vertex(x, j, half_height), product_vertex(x, j + 1, half_height), 1.0});
    }
  }
  return WeightedGraph::from_edges(n, edges);
}

Window build_product_window(const Window& base, int half_height) {
  require(half_height >= 1, "product window needs half height >= 1");
  WeightedGraph g = build_product_with_line(base.graph(), half_height);
  std::vector<VertexId> boundary;
  for (VertexId x = 0; x < base.size(); ++x) {
    for (int j = -half_height; j <= half_height; ++j) {
      if (base.is_boundary(x) || std::abs(j) == half_height) {
        boundary.push_back(product_vertex(x, j, half_height));
      }
    }
  }
  std::vector<double> returns(boundary.size(), 0.0);
  Window w(std::move(g), std::move(boundary), std::move(returns),
           base.label() + "xZ(h=" + std::to_string(half_height) + ")");
  w.radius = base.radius;
  return w;
}

Window build_remark33_graph(int n_max) {
  require(n_max >= 5, "exponential half-line graph needs n_max >= 5");
  // e^n stays finite in double precision up to n = 709.
  require(n_max <= 700, "exponential half-line weights overflow beyond n_max = 700");
  std::vector<Edge> edges;
  for (int k = 0; k < n_max; ++k) {
    const double w = k >= 3 ? std::exp(static_cast<double>(k)) : 1.0;
    edges.push_back({static_cast<VertexId>(k), static_cast<VertexId>(k + 1), w});
  }
  edges.push_back({0, 3, 1.0});
  Window w(WeightedGraph::from_edges(static_cast<std::size_t>(n_max) + 1, edges),
           {static_cast<VertexId>(n_max)}, {0.0},
           "exp_halfline(n_max=" + std::to_string(n_max) + ")");
  w.radius = n_max;
  return w;
}

}  // namespace interlace
