#include "interlace/potential.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <deque>
#include <cmath>

#include "interlace/parallel.hpp"
#include "interlace/rng.hpp"
#include "interlace/walk.hpp"

namespace interlace {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

void check_set(const Window& w, const VertexSet& k) {
  if (k.empty()) throw PotentialError(PotentialErrc::EmptySet, "vertex set K is empty");
  if (k.universe() != w.size()) {
    throw PotentialError(PotentialErrc::InvalidSet, "vertex set K does not belong to this window");
  }
  if (w.boundary().empty()) {
    throw PotentialError(PotentialErrc::NoEscape,
                         "window has no boundary: the walk is recurrent and never escapes");
  }
}

Eigen::VectorXd solve_spd(std::size_t n, const std::vector<Triplet>& entries, const Eigen::VectorXd& rhs,
                          const SolverOptions& opts) {
  if (n == 0) return Eigen::VectorXd();
  SparseMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(entries.begin(), entries.end());
  if (n < opts.direct_limit) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
    if (ldlt.info() != Eigen::Success) {
      throw PotentialError(PotentialErrc::SolverFailure, "sparse LDLT factorization failed");
    }
    Eigen::VectorXd x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success) {
      throw PotentialError(PotentialErrc::SolverFailure, "sparse LDLT solve failed");
    }
    return x;
  }
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(opts.cg_tolerance);
  cg.setMaxIterations(opts.cg_max_iterations);
  cg.compute(a);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw PotentialError(PotentialErrc::SolverFailure,
                         "conjugate gradients did not reach tolerance within " +
                             std::to_string(opts.cg_max_iterations) + " iterations");
  }
  return x;
}

bool is_kill(const Window& w, VertexId x) { return w.is_boundary(x) && w.continuation(x) == 0.0; }

}  // namespace

HarmonicSolution escape_probability(const Window& w, const VertexSet& k, const SolverOptions& opts) {
  check_set(w, k);
  const WeightedGraph& g = w.graph();
  const std::size_t n = w.size();

  // Unknowns: vertices off K where the walk may still take a step.
  std::vector<std::int64_t> index(n, -1);
  std::size_t unknowns = 0;
  for (VertexId x = 0; x < n; ++x) {
    if (!k.contains(x) && !is_kill(w, x)) index[x] = static_cast<std::int64_t>(unknowns++);
  }

  // h(y) = (1 - c_y) + c_y sum_z q(y, z) h(z), scaled by mu_y / c_y into a
  // symmetric system.
  std::vector<Triplet> entries;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
  for (VertexId y = 0; y < n; ++y) {
    if (index[y] < 0) continue;
    const auto row = static_cast<Eigen::Index>(index[y]);
    const double c = w.continuation(y);
    entries.emplace_back(row, row, g.mu(y) / c);
    rhs[row] += g.mu(y) * (1.0 - c) / c;
    const auto nb = g.neighbors(y);
    const auto wt = g.weights(y);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId z = nb[i];
      if (index[z] >= 0) {
        entries.emplace_back(row, static_cast<Eigen::Index>(index[z]), -wt[i]);
      } else if (!k.contains(z)) {
        rhs[row] += wt[i];  // Kill vertex: escape is certain there
      }
    }
  }
  const Eigen::VectorXd sol = solve_spd(unknowns, entries, rhs, opts);

  HarmonicSolution h;
  h.values.assign(n, 0.0);
  for (VertexId x = 0; x < n; ++x) {
    if (index[x] >= 0) {
      h.values[x] = std::clamp(sol[static_cast<Eigen::Index>(index[x])], 0.0, 1.0);
    } else if (!k.contains(x)) {
      h.values[x] = 1.0;
    }
  }
  return h;
}

double restarted_escape(const Window& w, const HarmonicSolution& h, VertexId x) {
  const WeightedGraph& g = w.graph();
  const double c = w.continuation(x);
  double onward = 0.0;
  const auto nb = g.neighbors(x);
  const auto wt = g.weights(x);
  for (std::size_t i = 0; i < nb.size(); ++i) onward += wt[i] * h.values[nb[i]];
  return (1.0 - c) + c * onward / g.mu(x);
}

EquilibriumMeasure equilibrium_measure(const Window& w, const VertexSet& k, const SolverOptions& opts) {
  const HarmonicSolution h = escape_probability(w, k, opts);
  EquilibriumMeasure e;
  e.mass.assign(w.size(), 0.0);
  for (VertexId x : k.members()) {
    const double m = w.graph().mu(x) * restarted_escape(w, h, x);
    e.mass[x] = m;
    e.support.push_back(x);
  }
  // Summed in vertex order so the total is reproducible.
  for (VertexId x : e.support) e.total += e.mass[x];
  return e;
}

double capacity(const Window& w, const VertexSet& k, const SolverOptions& opts) {
  return equilibrium_measure(w, k, opts).total;
}

double capacity_variational(const Window& w, const VertexSet& k, const SolverOptions& opts) {
  check_set(w, k);
  for (VertexId x : k.members()) {
    if (w.is_boundary(x)) {
      throw PotentialError(PotentialErrc::InvalidSet,
                           "variational capacity needs K inside the interior");
    }
  }
  const WeightedGraph& g = w.graph();
  const std::size_t n = w.size();

  auto ground = [&](VertexId b) {
    const double p = w.continuation(b);
    return w.is_boundary(b) ? g.mu(b) * (1.0 - p) / p : 0.0;
  };

  std::vector<std::int64_t> index(n, -1);
  std::size_t unknowns = 0;
  for (VertexId x = 0; x < n; ++x) {
    if (!k.contains(x) && !is_kill(w, x)) index[x] = static_cast<std::int64_t>(unknowns++);
  }

  // Stationarity of the energy: (sum_z a_yz + g_y) f_y - sum_z a_yz f_z = 0,
  // with f = 1 on K and f = 0 on Kill vertices.
  std::vector<Triplet> entries;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
  for (VertexId y = 0; y < n; ++y) {
    if (index[y] < 0) continue;
    const auto row = static_cast<Eigen::Index>(index[y]);
    double diag = ground(y);
    const auto nb = g.neighbors(y);
    const auto wt = g.weights(y);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      diag += wt[i];
      if (index[nb[i]] >= 0) {
        entries.emplace_back(row, static_cast<Eigen::Index>(index[nb[i]]), -wt[i]);
      } else if (k.contains(nb[i])) {
        rhs[row] += wt[i];
      }
    }
    entries.emplace_back(row, row, diag);
  }
  const Eigen::VectorXd sol = solve_spd(unknowns, entries, rhs, opts);

  std::vector<double> f(n, 0.0);
  for (VertexId x = 0; x < n; ++x) {
    if (k.contains(x)) {
      f[x] = 1.0;
    } else if (index[x] >= 0) {
      f[x] = sol[static_cast<Eigen::Index>(index[x])];
    }
  }
  double energy = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = f[e.from] - f[e.to];
    energy += e.weight * d * d;
  }
  for (VertexId b : w.boundary()) {
    if (index[b] >= 0) energy += ground(b) * f[b] * f[b];
  }
  return energy;
}

McEstimate escape_probability_mc(const Window& w, const VertexSet& k, VertexId x, std::uint64_t trials,
                                 std::uint64_t seed, int threads) {
  if (trials == 0) throw std::invalid_argument("escape_probability_mc needs trials >= 1");
  if (x >= w.size()) throw GraphError(GraphErrc::VertexOutOfRange, "start vertex out of range");
  struct Count {
    std::uint64_t escaped = 0;
    std::uint64_t killed = 0;
    void merge(const Count& o) {
      escaped += o.escaped;
      killed += o.killed;
    }
  };
  const StopRule stop = StopRule::until_hit(k);
  const Count total = parallel_trials<Count>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Count& acc) {
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      const Terminal end = walk(w, x, rng, stop, [](VertexId) {});
      if (end == Terminal::Escaped) ++acc.escaped;
      if (end == Terminal::Killed) ++acc.killed;
    }
  });
  if (total.killed > 0) {
    throw PotentialError(PotentialErrc::SolverFailure,
                         std::to_string(total.killed) + " walks exhausted the step budget");
  }
  Proportion p{total.escaped, trials};
  return {p.estimate(), p.stderr_(), trials, total.escaped};
}

double capacity_lower_bound(double kappa_bar, double mu_a) {
  if (!(kappa_bar > 0.0)) throw std::invalid_argument("kappa_bar must be positive");
  return mu_a / kappa_bar;
}

double dirichlet_energy(const Window& w, std::span<const double> f) {
  const WeightedGraph& g = w.graph();
  auto value = [&](VertexId x) { return w.is_boundary(x) ? 0.0 : f[x]; };
  double energy = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = value(e.from) - value(e.to);
    energy += e.weight * d * d;
  }
  return energy;
}

double weighted_norm_sq(const Window& w, std::span<const double> f) {
  double s = 0.0;
  for (VertexId x : w.interior()) s += f[x] * f[x] * w.graph().mu(x);
  return s;
}

DirichletCalibration calibrate_dirichlet_constant(const Window& w, int functions, std::uint64_t seed) {
  if (functions < 1) throw std::invalid_argument("need at least one test function");
  if (w.interior().empty()) throw PotentialError(PotentialErrc::InvalidSet, "window has no interior");
  const WeightedGraph& g = w.graph();

  // distance to the boundary; centers come from the deeper half
  std::vector<int> depth(w.size(), -1);
  std::deque<VertexId> queue;
  for (VertexId b : w.boundary()) {
    depth[b] = 0;
    queue.push_back(b);
  }
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    for (VertexId y : g.neighbors(x)) {
      if (depth[y] < 0) {
        depth[y] = depth[x] + 1;
        queue.push_back(y);
      }
    }
  }
  int deepest = 0;
  for (VertexId x : w.interior()) deepest = std::max(deepest, depth[x]);
  std::vector<VertexId> centers;
  for (VertexId x : w.interior()) {
    if (w.boundary().empty() || 2 * depth[x] >= deepest) centers.push_back(x);
  }

  DirichletCalibration cal;
  std::vector<double> f(w.size(), 0.0);
  for (int i = 0; i < functions; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const VertexId center = centers[static_cast<std::size_t>(rng.uniform() * static_cast<double>(centers.size()))];
    const auto dist = bfs_distances(g, center);
    std::fill(f.begin(), f.end(), 0.0);
    const double r = 0.3 + 0.65 * rng.uniform();
    switch (i % 3) {
      case 0:
        for (VertexId x : w.interior()) f[x] = std::pow(r, dist[x]);
        break;
      case 1: {
        const int plateau = static_cast<int>(rng.uniform() * 4.0);
        for (VertexId x : w.interior()) f[x] = dist[x] <= plateau ? 1.0 : std::pow(r, dist[x] - plateau);
        break;
      }
      default: {
        const int reach = static_cast<int>(rng.uniform() * 4.0);
        for (VertexId x : w.interior()) {
          if (dist[x] <= reach) f[x] = rng.uniform();
        }
      }
    }
    const double energy = dirichlet_energy(w, f);
    if (energy > 0.0) cal.kappa_bar = std::max(cal.kappa_bar, weighted_norm_sq(w, f) / energy);
    ++cal.functions;
  }
  return cal;
}

}  // namespace interlace
