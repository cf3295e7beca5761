#pragma once

#include <cmath>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/rng.hpp"

namespace testing {

using namespace interlace;

// Connected random graph: a random spanning tree plus `extra` chords, weights
// in [0.2, 2]. The last `boundary` vertices form a boundary with the given
// return probability.
inline Window random_window(Rng& rng, std::size_t n, std::size_t extra, std::size_t boundary, double p = 0.0) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    const auto parent = static_cast<VertexId>(rng.uniform() * v);
    edges.push_back({parent, v, 0.2 + 1.8 * rng.uniform()});
  }
  for (std::size_t i = 0; i < extra; ++i) {
    const auto a = static_cast<VertexId>(rng.uniform() * n);
    const auto b = static_cast<VertexId>(rng.uniform() * n);
    if (a == b) continue;
    bool dup = false;
    for (const auto& e : edges) dup = dup || (e.from == a && e.to == b) || (e.from == b && e.to == a);
    if (!dup) edges.push_back({a, b, 0.2 + 1.8 * rng.uniform()});
  }
  std::vector<VertexId> bd;
  for (std::size_t i = n - boundary; i < n; ++i) bd.push_back(static_cast<VertexId>(i));
  return Window(WeightedGraph::from_edges(n, edges), bd, std::vector<double>(bd.size(), p), "random");
}

// Random subset of the interior of size 1..max_size.
inline std::vector<VertexId> random_subset(Rng& rng, const Window& w, std::size_t max_size) {
  const auto interior = w.interior();
  const std::size_t size = 1 + static_cast<std::size_t>(rng.uniform() * std::min(max_size, interior.size()));
  std::vector<VertexId> pool(interior.begin(), interior.end());
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform() * (pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

inline bool within_se(double estimate, double exact, double se, double k = 3.0) {
  return std::abs(estimate - exact) <= k * se;
}

}  // namespace testing
