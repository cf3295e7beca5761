#pragma once

#include "interlace/graph.hpp"

namespace interlace {

// Ball of radius `radius` around the root (vertex 0) of the d-regular tree,
// vertices numbered in breadth-first order. Vertices at distance `radius`
// form the boundary with return probability 1/(d-1): a walk leaving through
// boundary vertex b comes back to parent(b) with exactly that probability.
Window build_regular_tree(int degree, int radius, double edge_weight);

// Z^dim restricted to the interior cube |x|_inf <= radius - 1, plus the outer
// lattice neighbors of that cube as a Kill boundary. Edge weights 1/(2 dim).
// The center is vertex 0.
Window build_lattice_ball(int dim, int radius);

// base x {-half_height, ..., half_height} with horizontal copies of the base
// weights and unit vertical weights. Vertex (x, j) has index
// x * (2 half_height + 1) + (j + half_height).
WeightedGraph build_product_with_line(const WeightedGraph& base, int half_height);

// Product window: base boundary times every level, plus the top and bottom
// levels, all Kill.
Window build_product_window(const Window& base, int half_height);

inline VertexId product_vertex(VertexId base_vertex, int level, int half_height) {
  return base_vertex * static_cast<VertexId>(2 * half_height + 1) +
         static_cast<VertexId>(level + half_height);
}

// Vertices {0..n_max}, edges {k, k+1} and {0, 3}; weight e^k on {k, k+1} for
// k >= 3, weight 1 otherwise. Vertex n_max is a Kill boundary.
Window build_remark33_graph(int n_max);

}  // namespace interlace
