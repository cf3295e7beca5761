#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/potential.hpp"
#include "interlace/rng.hpp"
#include "interlace/walk.hpp"

namespace interlace {

struct MarkedTrajectory {
  Trajectory path;
  double mark = 0.0;  // level in [0, u] at which the trajectory switches on
};

// Trajectories of the interlacement at level `level` that meet the sampling
// set K, each recorded from its first visit to K onwards.
//
// The part of a trajectory before its first visit to K avoids K, so the trace
// restricted to K is exact: I^u intersected with K is the union of these
// forward ranges. Vertices outside K are covered only partially.
struct InterlacementSample {
  const Window* window = nullptr;
  VertexSet sampling_set;
  double level = 0.0;
  std::vector<MarkedTrajectory> trajectories;
};

// 1 = vacant. Bits are exact on `observed` (the sampling set).
struct VacantConfiguration {
  const Window* window = nullptr;
  VertexSet observed;
  std::vector<std::uint8_t> bits;

  bool vacant(VertexId x) const noexcept { return bits[x] != 0; }
};

// Generation-stamped occupancy marks; clearing is O(1) per sample.
class OccupancyMap {
 public:
  explicit OccupancyMap(std::size_t n = 0) : stamp_(n, 0) {}

  void reset(std::size_t n) {
    if (stamp_.size() != n) stamp_.assign(n, 0);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  void occupy(VertexId x) noexcept { stamp_[x] = epoch_; }
  bool occupied(VertexId x) const noexcept { return stamp_[x] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// Draws interlacement samples on a window for a fixed sampling set K.
//
// One sample at level u: N ~ Poisson(u cap(K)) trajectories, each started at x
// with probability e_K(x) / cap(K), run forward until escape, and given an
// independent mark uniform on [0, u].
class InterlacementSampler {
 public:
  InterlacementSampler(const Window& w, VertexSet sampling_set, const SolverOptions& opts = {});

  const Window& window() const noexcept { return *window_; }
  const VertexSet& sampling_set() const noexcept { return set_; }
  const EquilibriumMeasure& equilibrium() const noexcept { return eq_; }
  double capacity() const noexcept { return eq_.total; }

  InterlacementSample sample(double u, Rng& rng) const;

  // Same draws as sample(), but only marks the visited vertices. Returns the
  // number of trajectories.
  std::uint64_t occupy(double u, Rng& rng, OccupancyMap& occupancy) const;

 private:
  template <class Visit>
  std::uint64_t draw(double u, Rng& rng, Visit&& on_trajectory) const;

  const Window* window_;
  VertexSet set_;
  EquilibriumMeasure eq_;
  std::vector<VertexId> starts_;
  std::vector<double> start_weights_;
};

InterlacementSample sample_interlacement(const Window& w, const VertexSet& k, double u, std::uint64_t seed);

VacantConfiguration vacant_configuration(const InterlacementSample& s);

// Keeps the trajectories with mark <= new_level.
InterlacementSample restrict_to_level(const InterlacementSample& s, double new_level);

double vacancy_probability_exact(const Window& w, const VertexSet& k, double u);

// Fraction of samples in which every vertex of K is vacant; trial t uses
// Rng::stream(seed, t).
McEstimate vacancy_probability_mc(const Window& w, const VertexSet& k, double u, std::uint64_t trials,
                                  std::uint64_t seed, int threads = 1);

}  // namespace interlace
