#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "interlace/sampler.hpp"
#include "interlace/stats.hpp"

namespace interlace {

struct ClusterReport {
  VertexId origin = 0;
  std::size_t size = 0;
  // The cluster contains an interior vertex adjacent to the boundary: the
  // finite-window stand-in for "the cluster is infinite".
  bool reached_boundary = false;
  std::vector<VertexId> vertices;
};

// Vacant component of x within the observed vertices; size 0 if x is occupied.
ClusterReport cluster_of(const VacantConfiguration& c, VertexId x);

struct EtaEstimate {
  double u = 0.0;
  VertexId origin = 0;
  double probability = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  int radius = 0;  // graph distance from the origin to the boundary
};

// Fraction of samples (sampling set = window interior) whose vacant cluster
// at x reaches the boundary. An upper bound for eta(u, x) that decreases as
// the window grows.
EtaEstimate eta_mc(const Window& w, VertexId x, double u, std::uint64_t trials, std::uint64_t seed,
                   int threads = 1);

// Statistics of the vacant cluster at a fixed origin, with the sampling set
// equal to the window interior. Reuse one instance across levels.
class ClusterProbe {
 public:
  ClusterProbe(const Window& w, VertexId origin);

  struct Outcome {
    std::uint32_t size = 0;
    bool reached_boundary = false;
    std::uint32_t inner_shell = 0;  // cluster vertices at distance inner_radius
    std::uint32_t outer_shell = 0;  // cluster vertices at distance 2 * inner_radius
  };

  struct Workspace {
    OccupancyMap occupied;
    OccupancyMap visited;
    std::vector<VertexId> queue;
  };

  Outcome run(double u, Rng& rng, Workspace& ws) const;

  const InterlacementSampler& sampler() const noexcept { return sampler_; }
  VertexId origin() const noexcept { return origin_; }
  int boundary_distance() const noexcept { return boundary_distance_; }
  int inner_radius() const noexcept { return inner_radius_; }
  int outer_radius() const noexcept { return 2 * inner_radius_; }

 private:
  const Window* window_;
  VertexId origin_;
  InterlacementSampler sampler_;
  std::vector<int> distance_;
  int boundary_distance_ = 0;
  int inner_radius_ = 0;
};

enum class Verdict { Percolating, Null, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct UstarProbe {
  double u = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  // Mean and standard error of (outer shell size - inner shell size).
  double growth_mean = 0.0;
  double growth_stderr = 0.0;
  EtaEstimate eta;     // reaches the boundary
  double eta_inner = 0.0;  // reaches distance inner_radius
  double eta_outer = 0.0;  // reaches distance 2 * inner_radius
};

struct UstarBracket {
  double lo = 0.0;
  double hi = 0.0;
  double confidence = 0.95;
  std::array<int, 2> radii_checked{};
  std::vector<UstarProbe> probes;
  int iterations = 0;
  std::string stop_reason;
};

struct UstarOptions {
  int max_iterations = 8;
  double min_width = 0.2;
  double confidence = 0.95;
  int threads = 1;
};

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& message, std::vector<UstarProbe> probes)
      : std::runtime_error(message), probes_(std::move(probes)) {}
  const std::vector<UstarProbe>& probes() const noexcept { return probes_; }

 private:
  std::vector<UstarProbe> probes_;
};

// Classifies level u by radius doubling: the vacant cluster at x is counted on
// the spheres of radius r and 2r (2r below the boundary). Percolating when
// the outer sphere holds significantly more cluster vertices than the inner
// one, Null when significantly fewer.
UstarProbe classify_level(const ClusterProbe& probe, double u, std::uint64_t trials, std::uint64_t seed,
                          double confidence, int threads = 1);

// Bisection on classify_level. Both ends must classify (lo Percolating,
// hi Null) or BracketError is thrown. Stops after max_iterations, when the
// bracket is narrower than min_width, or at the first inconclusive midpoint;
// the bracket only ever moves on a significant verdict.
UstarBracket estimate_ustar(const Window& w, VertexId x, double u_lo, double u_hi, std::uint64_t trials,
                            std::uint64_t seed, const UstarOptions& opts = {});

struct CoupledEtaReport {
  std::vector<double> levels;
  std::vector<std::uint64_t> reached;  // per level, samples whose cluster reached the boundary
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;  // reached at a higher level but not at a lower one
};

// One sample at the top level per trial, thinned to each lower level with
// restrict_to_level.
CoupledEtaReport coupled_eta_monotonicity(const Window& w, VertexId x, std::vector<double> levels,
                                          std::uint64_t samples, std::uint64_t seed);

// log(q) / (beta m): above it q^n exp(-beta u m n) vanishes as n grows.
double peierls_threshold(int q_degree, double beta, double m);

// q^n exp(-beta u m n) for n = 1..n_max.
std::vector<double> peierls_bound_curve(int q_degree, double beta, double m, double u, int n_max);

}  // namespace interlace
