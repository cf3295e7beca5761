#include "interlace/walk.hpp"

namespace interlace {

const char* to_string(Terminal t) noexcept {
  switch (t) {
    case Terminal::Escaped: return "Escaped";
    case Terminal::HitTarget: return "HitTarget";
    case Terminal::Killed: return "Killed";
  }
  return "Unknown";
}

std::vector<std::pair<VertexId, double>> transition_distribution(const WeightedGraph& g, VertexId x) {
  const auto nb = g.neighbors(x);
  const auto wt = g.weights(x);
  std::vector<std::pair<VertexId, double>> out;
  out.reserve(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) out.emplace_back(nb[i], wt[i] / g.mu(x));
  return out;
}

Trajectory run_walk(const Window& w, VertexId start, Rng& rng, const StopRule& stop) {
  if (start >= w.size()) {
    throw GraphError(GraphErrc::VertexOutOfRange, "walk start " + std::to_string(start) + " out of range");
  }
  Trajectory t;
  t.terminal = walk(w, start, rng, stop, [&](VertexId v) { t.vertices.push_back(v); });
  return t;
}

}  // namespace interlace
