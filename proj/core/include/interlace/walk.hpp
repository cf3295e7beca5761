#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/rng.hpp"

namespace interlace {

enum class Terminal {
  Escaped,    // left through the boundary for good
  HitTarget,  // reached the target set at a strictly positive time
  Killed,     // step budget exhausted
};

const char* to_string(Terminal t) noexcept;

struct Trajectory {
  std::vector<VertexId> vertices;
  Terminal terminal = Terminal::Escaped;
};

// UntilEscape, UntilHit(K) and MaxSteps(n) combined: the walk stops at the
// first of escape, a visit to `target` at time >= 1, or `max_steps` steps.
struct StopRule {
  const VertexSet* target = nullptr;
  std::uint64_t max_steps = kDefaultMaxSteps;

  static constexpr std::uint64_t kDefaultMaxSteps = 1'000'000'000;

  static StopRule until_escape() { return {}; }
  static StopRule until_hit(const VertexSet& k) { return {&k, kDefaultMaxSteps}; }
  static StopRule max(std::uint64_t n) { return {nullptr, n}; }
};

// q(x, .) as (neighbor, probability) pairs.
std::vector<std::pair<VertexId, double>> transition_distribution(const WeightedGraph& g, VertexId x);

// Walk kernel shared by run_walk and the samplers; `visit` sees every vertex
// of the trace including the start.
template <class Visit>
Terminal walk(const Window& w, VertexId start, Rng& rng, const StopRule& stop, Visit&& visit) {
  const WeightedGraph& g = w.graph();
  VertexId x = start;
  visit(x);
  for (std::uint64_t steps = 0;; ++steps) {
    if (steps > 0 && stop.target != nullptr && stop.target->contains(x)) return Terminal::HitTarget;
    if (steps >= stop.max_steps) return Terminal::Killed;
    const double c = w.continuation(x);
    if (c < 1.0 && !(rng.uniform() < c)) return Terminal::Escaped;
    x = g.sample_neighbor(x, rng.uniform());
    visit(x);
  }
}

Trajectory run_walk(const Window& w, VertexId start, Rng& rng, const StopRule& stop);

}  // namespace interlace
