#include "interlace/tree_exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "interlace/parallel.hpp"

namespace interlace {

TreeRooted::TreeRooted(const Window& w, VertexId root) : window_(&w), root_(root) {
  const WeightedGraph& g = w.graph();
  if (root >= w.size() || w.is_boundary(root)) {
    throw GraphError(GraphErrc::InvalidArgument, "tree root must be an interior vertex");
  }
  if (g.edge_count() + 1 != g.size()) {
    throw GraphError(GraphErrc::InvalidArgument, "window graph is not a tree");
  }
  parent_.assign(w.size(), root);
  depth_.assign(w.size(), -1);
  depth_[root] = 0;
  order_.reserve(w.size());
  order_.push_back(root);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const VertexId v = order_[head];
    for (VertexId y : g.neighbors(v)) {
      if (depth_[y] >= 0) continue;
      depth_[y] = depth_[v] + 1;
      parent_[y] = v;
      order_.push_back(y);
    }
  }
}

std::vector<double> hit_parent_probabilities(const TreeRooted& t) {
  const Window& w = t.window();
  const WeightedGraph& g = w.graph();
  std::vector<double> x(w.size(), 0.0);
  const auto& order = t.order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId z = *it;
    if (z == t.root()) continue;
    const VertexId up = t.parent(z);
    const double c = w.continuation(z);
    double back_from_children = 0.0;
    double to_parent = 0.0;
    const auto nb = g.neighbors(z);
    const auto wt = g.weights(z);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const double q = wt[i] / g.mu(z);
      if (nb[i] == up) {
        to_parent = q;
      } else {
        back_from_children += q * x[nb[i]];
      }
    }
    const double denom = 1.0 - c * back_from_children;
    // On a tree 1 - sum_{children} q x >= q(z, parent) > 0.
    if (!(denom > 0.0)) throw std::logic_error("hitting recursion lost positivity");
    x[z] = c * to_parent / denom;
  }
  return x;
}

std::vector<double> CouplingTable::open_probability(double u) const {
  std::vector<double> out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [u](double v) { return std::exp(-u * v); });
  return out;
}

CouplingTable coupling_f(const TreeRooted& t) {
  const Window& w = t.window();
  const WeightedGraph& g = w.graph();
  const std::vector<double> x = hit_parent_probabilities(t);
  CouplingTable table;
  table.f.assign(w.size(), 0.0);
  table.escape_down.assign(w.size(), 0.0);
  table.avoid_parent.assign(w.size(), 1.0);
  for (VertexId z = 0; z < w.size(); ++z) {
    const bool is_root = z == t.root();
    table.avoid_parent[z] = is_root ? 1.0 : 1.0 - x[z];
    if (w.is_boundary(z)) continue;
    double down = 0.0;
    const auto nb = g.neighbors(z);
    const auto wt = g.weights(z);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!is_root && nb[i] == t.parent(z)) continue;
      down += wt[i] / g.mu(z) * (1.0 - x[nb[i]]);
    }
    table.escape_down[z] = down;
    table.f[z] = down * g.mu(z) * table.avoid_parent[z];
  }

  const auto interior = w.interior();
  const std::size_t degree = g.degree(interior.front());
  const double weight = g.weights(interior.front()).front();
  for (VertexId z : interior) {
    const auto wt = g.weights(z);
    if (g.degree(z) != degree ||
        std::any_of(wt.begin(), wt.end(), [&](double a) { return std::abs(a - weight) > kWeightTolerance * weight; })) {
      table.approximate = true;
    }
  }
  for (VertexId b : w.boundary()) {
    const double exact = 1.0 / (static_cast<double>(degree) - 1.0);
    if (degree < 3 || std::abs(w.continuation(b) - exact) > 1e-12) table.approximate = true;
  }
  return table;
}

ClusterReport bernoulli_cluster_sample(const TreeRooted& t, const CouplingTable& table, double u, Rng& rng,
                                       double f_scale) {
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  const Window& w = t.window();
  ClusterReport r;
  r.origin = t.root();
  auto open = [&](VertexId z) { return rng.uniform() < std::exp(-u * f_scale * table.f[z]); };
  if (!open(t.root())) return r;
  r.vertices.push_back(t.root());
  for (std::size_t head = 0; head < r.vertices.size(); ++head) {
    const VertexId v = r.vertices[head];
    if (w.touches_boundary(v)) r.reached_boundary = true;
    for (VertexId y : w.graph().neighbors(v)) {
      if (w.is_boundary(y) || (v != t.root() && y == t.parent(v)) || y == t.root()) continue;
      if (open(y)) r.vertices.push_back(y);
    }
  }
  r.size = r.vertices.size();
  std::sort(r.vertices.begin(), r.vertices.end());
  return r;
}

ClusterReport bernoulli_cluster_sample(const TreeRooted& t, double u, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0);
  return bernoulli_cluster_sample(t, coupling_f(t), u, rng);
}

EquivalenceReport cluster_law_equivalence_test(const TreeRooted& t, double u, std::uint64_t trials,
                                               std::uint64_t seed, double f_scale, int threads) {
  if (trials < 10'000) throw std::invalid_argument("cluster_law_equivalence_test needs trials >= 10^4");
  const ClusterProbe probe(t.window(), t.root());
  const CouplingTable table = coupling_f(t);
  const std::uint64_t interlacement_seed = Rng::derive(seed, 0);
  const std::uint64_t bernoulli_seed = Rng::derive(seed, 1);

  struct Hist {
    std::vector<std::uint64_t> inter = std::vector<std::uint64_t>(kHistogramCap + 1, 0);
    std::vector<std::uint64_t> bern = std::vector<std::uint64_t>(kHistogramCap + 1, 0);
    void merge(const Hist& o) {
      for (std::size_t i = 0; i < inter.size(); ++i) {
        inter[i] += o.inter[i];
        bern[i] += o.bern[i];
      }
    }
  };
  auto bin = [](std::size_t size) { return std::min<std::size_t>(size, kHistogramCap); };
  const Hist h = parallel_trials<Hist>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Hist& acc) {
    ClusterProbe::Workspace ws;
    for (std::uint64_t k = first; k < last; ++k) {
      Rng a = Rng::stream(interlacement_seed, k);
      ++acc.inter[bin(probe.run(u, a, ws).size)];
      Rng b = Rng::stream(bernoulli_seed, k);
      ++acc.bern[bin(bernoulli_cluster_sample(t, table, u, b, f_scale).size)];
    }
  });

  EquivalenceReport rep;
  rep.trials = trials;
  const double n = static_cast<double>(trials);
  for (std::size_t i = 0; i < h.inter.size(); ++i) {
    const double p = static_cast<double>(h.inter[i]) / n;
    const double q = static_cast<double>(h.bern[i]) / n;
    rep.interlacement_histogram.push_back(p);
    rep.bernoulli_histogram.push_back(q);
    rep.tv += 0.5 * std::abs(p - q);
  }
  rep.threshold = 4.0 * std::sqrt(static_cast<double>(kHistogramCap) / n);
  rep.pass = rep.tv <= rep.threshold;
  return rep;
}

namespace {

void require_degree(int d) {
  if (d < 3) throw std::invalid_argument("regular tree formulas need d >= 3");
}

void require_level(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("level u must be finite and >= 0");
}

}  // namespace

double regular_tree_ustar(int d) {
  require_degree(d);
  const double dd = d;
  return dd * (dd - 1.0) * std::log(dd - 1.0) / ((dd - 2.0) * (dd - 2.0));
}

double regular_tree_open_probability(int d, double u) {
  require_degree(d);
  require_level(u);
  const double dd = d;
  return std::exp(-u * (dd - 2.0) * (dd - 2.0) / (dd * (dd - 1.0)));
}

double regular_tree_root_open_probability(int d, double u) {
  require_degree(d);
  require_level(u);
  const double dd = d;
  return std::exp(-u * (dd - 2.0) / (dd - 1.0));
}

double branching_mean(int d, double u) { return (d - 1) * regular_tree_open_probability(d, u); }

FixedPointResult regular_tree_extinction(int d, double u) {
  const double p = regular_tree_open_probability(d, u);
  const int k = d - 1;
  // Newton on the convex h(s) = 1 - p + p s^k - s from s = 0 climbs
  // monotonically to the smallest root.
  FixedPointResult r;
  double s = 0.0;
  constexpr int kMaxIterations = 100'000;
  constexpr double kTolerance = 1e-12;
  for (r.iterations = 1; r.iterations <= kMaxIterations; ++r.iterations) {
    const double h = 1.0 - p + p * std::pow(s, k) - s;
    const double dh = p * k * std::pow(s, k - 1) - 1.0;
    if (h <= 0.0 || dh >= 0.0) break;  // at (or numerically past) the root
    const double step = -h / dh;
    s = std::min(1.0, s + step);
    if (step < kTolerance) break;
  }
  if (r.iterations > kMaxIterations) throw std::runtime_error("extinction fixed point did not converge");
  r.extinction = s;
  return r;
}

double regular_tree_eta(int d, double u) {
  const double p0 = regular_tree_root_open_probability(d, u);
  // Mean offspring <= 1: extinction is certain, s = 1.
  if (branching_mean(d, u) <= 1.0) return 0.0;
  const double s = regular_tree_extinction(d, u).extinction;
  return p0 * (1.0 - std::pow(s, d));
}

double regular_tree_eta_truncated(int d, double u, int radius) {
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");
  const double p = regular_tree_open_probability(d, u);
  const double p0 = regular_tree_root_open_probability(d, u);
  if (radius == 1) return p0;
  // reach[n]: a non-root vertex is open and its open subtree is n levels deep.
  double reach = p;
  for (int n = 1; n <= radius - 2; ++n) reach = p * (1.0 - std::pow(1.0 - reach, d - 1));
  return p0 * (1.0 - std::pow(1.0 - reach, d));
}

}  // namespace interlace
