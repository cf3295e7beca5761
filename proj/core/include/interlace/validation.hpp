#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/stats.hpp"

namespace interlace {

// An event on the vacant configuration. Pattern events fix the state of a
// few vertices (true = vacant); ClusterReachesBoundary asks that the vacant
// cluster of `origin` reach the window boundary.
struct EventSpec {
  enum class Kind { Pattern, ClusterReachesBoundary };

  Kind kind = Kind::Pattern;
  std::vector<std::pair<VertexId, bool>> constraints;
  VertexId origin = 0;
  bool increasing = true;

  // Throws std::invalid_argument if a vertex is constrained twice.
  static EventSpec pattern(std::vector<std::pair<VertexId, bool>> constraints);
  static EventSpec all_vacant(const std::vector<VertexId>& vertices);
  static EventSpec cluster_reaches_boundary(VertexId origin);
};

struct FkgCapacityReport {
  double cap1 = 0.0;
  double cap2 = 0.0;
  double cap_union = 0.0;
  // log P[K1, K2 vacant] - log P[K1 vacant] P[K2 vacant] = u (cap1 + cap2 - cap_union)
  double slack = 0.0;
  bool pass = false;
};

FkgCapacityReport fkg_capacity_check(const Window& w, const VertexSet& k1, const VertexSet& k2, double u);

struct FkgMcReport {
  double p1 = 0.0;
  double p2 = 0.0;
  double p12 = 0.0;
  double covariance = 0.0;
  double stderr_ = 0.0;  // delta-method standard error of the covariance
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool pass = false;  // covariance >= -3 stderr
};

// Empirical covariance of the two indicators under the vacant-set law.
FkgMcReport fkg_mc_check(const Window& w, double u, const EventSpec& e1, const EventSpec& e2, std::uint64_t trials,
                         std::uint64_t seed, int threads = 1);

// Pattern over vertices 0..3 of build_remark33_graph; Y[i] = 1 means vacant.
using Pattern4 = std::array<int, 4>;

// An occupied vertex all of whose neighbors are vacant cannot be produced by
// doubly infinite nearest-neighbor paths. Checks every constrained occupied
// vertex whose full neighborhood is constrained vacant.
bool structurally_impossible(const WeightedGraph& g, const std::vector<std::pair<VertexId, bool>>& pattern);

struct NamedEstimate {
  std::string name;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  Interval wilson;
};

struct CounterexampleReport {
  std::string which;
  double u = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int n_max = 0;
  double confidence = 0.95;
  std::vector<NamedEstimate> estimates;
  bool structural_zero = false;
  std::uint64_t trajectory_violations = 0;
  double symmetry_z = 0.0;
  std::string verdict;

  const NamedEstimate& estimate(const std::string& name) const;
};

inline constexpr int kRemark33Depth = 40;

// Sampled patterns on {0,1,2,3} of build_remark33_graph(n_max); the sampling
// set is {0,1,2,3}, on which the trace is exact.
std::vector<std::uint64_t> remark33_pattern_counts(double u, std::uint64_t trials, std::uint64_t seed,
                                                   int n_max = kRemark33Depth, int threads = 1,
                                                   std::uint64_t* trajectory_violations = nullptr);

// Verdicts: "impossible" (pattern (1,0,1,0) structurally excluded and never
// sampled, every trajectory through 1 also visits 0 or 2), else "contradiction".
CounterexampleReport remark33_impossible_configuration(double u, std::uint64_t trials, std::uint64_t seed,
                                                       int n_max = kRemark33Depth, int threads = 1);

// Verdicts: "violated", "vacuous" (u = 0), "inconclusive".
CounterexampleReport lattice_condition_violation(double u, std::uint64_t trials, std::uint64_t seed,
                                                 int n_max = kRemark33Depth, int threads = 1);

// Verdicts: "fails", "inconclusive". With monotone_conditional the
// conditioned variable is Y0 given (Y1, Y2, Y3), otherwise Y2 given
// (Y0, Y1, Y3).
CounterexampleReport markov_field_violation(double u, std::uint64_t trials, std::uint64_t seed,
                                            bool monotone_conditional = false, int n_max = kRemark33Depth,
                                            int threads = 1);

}  // namespace interlace
