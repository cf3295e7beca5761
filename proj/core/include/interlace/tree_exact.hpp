#pragma once

#include <cstdint>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/percolation.hpp"
#include "interlace/rng.hpp"

namespace interlace {

// A tree window hung from `root`.
class TreeRooted {
 public:
  // Throws GraphError(InvalidArgument) when the window graph has a cycle or
  // the root is a boundary vertex.
  TreeRooted(const Window& w, VertexId root);

  const Window& window() const noexcept { return *window_; }
  VertexId root() const noexcept { return root_; }
  // parent(root) == root.
  VertexId parent(VertexId z) const noexcept { return parent_[z]; }
  int depth(VertexId z) const noexcept { return depth_[z]; }
  // Vertices ordered by nondecreasing depth.
  const std::vector<VertexId>& order() const noexcept { return order_; }

 private:
  const Window* window_;
  VertexId root_;
  std::vector<VertexId> parent_;
  std::vector<int> depth_;
  std::vector<VertexId> order_;
};

// x_z = P_z[the walk ever visits parent(z)], solved leaves-up through
//   x_z = c_z q(z, parent) / (1 - c_z sum_{w child} q(z, w) x_w)
// where c_z is the continuation probability at z. Entry for the root is 0.
std::vector<double> hit_parent_probabilities(const TreeRooted& t);

// Per-vertex f_x(z) and P[z open] = exp(-u f_x(z)) for the site percolation
// that reproduces the vacant cluster of the root. Entries are meaningful on
// the interior; boundary vertices carry f = 0.
struct CouplingTable {
  std::vector<double> f;
  // f_x(z) = [sum_{w child} q(z, w)(1 - x_w)] * mu_z * (1 - x_z) for z != x;
  // at the root the last factor is 1, so f_x(x) = cap({x}).
  std::vector<double> escape_down;   // first factor
  std::vector<double> avoid_parent;  // last factor
  // Boundary hitting values are exact only for GeometricReturn boundaries on
  // regular trees; set for Kill boundaries and irregular trees.
  bool approximate = false;
  std::vector<double> open_probability(double u) const;
};

CouplingTable coupling_f(const TreeRooted& t);

// Open cluster of the root in the independent site percolation with
// P[z open] = exp(-u f_scale f_x(z)), explored lazily from the root over the
// interior. f_scale != 1 deliberately perturbs the law.
ClusterReport bernoulli_cluster_sample(const TreeRooted& t, const CouplingTable& table, double u, Rng& rng,
                                       double f_scale = 1.0);
ClusterReport bernoulli_cluster_sample(const TreeRooted& t, double u, std::uint64_t seed);

struct EquivalenceReport {
  double tv = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t trials = 0;
  std::vector<double> interlacement_histogram;  // sizes 0..29, then >= 30
  std::vector<double> bernoulli_histogram;
};

inline constexpr int kHistogramCap = 30;

// Cluster-size laws of the root: interlacement (sampling set = interior)
// against the Bernoulli coupling. Passes when the total variation distance
// is at most 4 sqrt(30 / trials).
EquivalenceReport cluster_law_equivalence_test(const TreeRooted& t, double u, std::uint64_t trials,
                                               std::uint64_t seed, double f_scale = 1.0, int threads = 1);

// Closed forms for the d-regular tree with weights 1/d.
double regular_tree_ustar(int d);
double branching_mean(int d, double u);
// Offspring-off-root open probability p and root open probability p0.
double regular_tree_open_probability(int d, double u);
double regular_tree_root_open_probability(int d, double u);

struct FixedPointResult {
  double extinction = 0.0;  // smallest root of s = 1 - p + p s^{d-1} in [0, 1]
  int iterations = 0;
};
FixedPointResult regular_tree_extinction(int d, double u);

// p0 (1 - s^d): probability that the vacant cluster of a vertex is infinite.
double regular_tree_eta(int d, double u);

// Probability that the root cluster reaches depth radius - 1, i.e. what
// eta_mc measures on build_regular_tree(d, radius, 1/d).
double regular_tree_eta_truncated(int d, double u, int radius);

}  // namespace interlace
