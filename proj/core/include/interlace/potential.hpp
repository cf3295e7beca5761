#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "interlace/graph.hpp"
#include "interlace/stats.hpp"

namespace interlace {

enum class PotentialErrc { EmptySet, NoEscape, SolverFailure, InvalidSet };

class PotentialError : public std::runtime_error {
 public:
  PotentialError(PotentialErrc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  PotentialErrc code() const noexcept { return code_; }

 private:
  PotentialErrc code_;
};

struct SolverOptions {
  // Below this many unknowns the system is factorized directly, otherwise
  // solved by preconditioned conjugate gradients.
  std::size_t direct_limit = 50'000;
  double cg_tolerance = 1e-12;
  long cg_max_iterations = 1'000'000;
};

// values[x] = probability that the walk from x never visits K (0 on K).
//
// Exact under GeometricReturn boundaries that carry the true return
// probability (regular trees). Under Kill it over-estimates the escape
// probability of the infinite graph; the bias shrinks as the window grows.
struct HarmonicSolution {
  std::vector<double> values;
};

HarmonicSolution escape_probability(const Window& w, const VertexSet& k, const SolverOptions& opts = {});

// P_x[walk never visits K at a time >= 1], given the solution for K.
double restarted_escape(const Window& w, const HarmonicSolution& h, VertexId x);

struct EquilibriumMeasure {
  std::vector<VertexId> support;
  std::vector<double> mass;  // indexed by vertex, zero off the support
  double total = 0.0;
};

// e_K(x) = mu_x * P_x[H~_K = infinity] for x in K.
EquilibriumMeasure equilibrium_measure(const Window& w, const VertexSet& k, const SolverOptions& opts = {});

double capacity(const Window& w, const VertexSet& k, const SolverOptions& opts = {});

// Minimal Dirichlet energy sum_{edges} a (f(x) - f(y))^2 over f = 1 on K and
// f = 0 at infinity. A GeometricReturn boundary vertex b is grounded through
// the conductance mu_b (1 - p_b) / p_b, which reproduces its escape law; Kill
// vertices are held at zero. Requires K inside the interior.
double capacity_variational(const Window& w, const VertexSet& k, const SolverOptions& opts = {});

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

// Fraction of walks from x that escape without visiting K at a time >= 1.
McEstimate escape_probability_mc(const Window& w, const VertexSet& k, VertexId x,
                                 std::uint64_t trials, std::uint64_t seed, int threads = 1);

// mu(A) / kappa_bar, the isoperimetric lower bound for cap(A).
double capacity_lower_bound(double kappa_bar, double mu_a);

// (1/2) sum_{x,y} |f(x) - f(y)|^2 a_{x,y} for f vanishing off the window
// interior; boundary entries of f are ignored and treated as zero.
double dirichlet_energy(const Window& w, std::span<const double> f);
// sum_x f(x)^2 mu_x over the interior.
double weighted_norm_sq(const Window& w, std::span<const double> f);

struct DirichletCalibration {
  double kappa_bar = 0.0;  // max ratio ||f||^2 / E(f) seen
  int functions = 0;
};

// Empirical constant for ||f||^2 <= kappa_bar E(f): the largest ratio over
// `functions` random finitely supported test functions around centers in the
// deeper half of the window: radial profiles r^{d(c, .)}, plateaus that are 1
// on a small ball and decay like r^{d(c, .)} outside it, and i.i.d. bumps.
DirichletCalibration calibrate_dirichlet_constant(const Window& w, int functions, std::uint64_t seed);

}  // namespace interlace
