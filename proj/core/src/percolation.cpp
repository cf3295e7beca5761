#include "interlace/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "interlace/parallel.hpp"

namespace interlace {

ClusterReport cluster_of(const VacantConfiguration& c, VertexId x) {
  if (c.window == nullptr) throw std::invalid_argument("configuration has no window");
  const Window& w = *c.window;
  if (x >= w.size() || w.is_boundary(x) || !c.observed.contains(x)) {
    throw std::invalid_argument("cluster origin must be an observed interior vertex");
  }
  ClusterReport r;
  r.origin = x;
  if (!c.vacant(x)) return r;

  std::vector<char> seen(w.size(), 0);
  r.vertices.push_back(x);
  seen[x] = 1;
  for (std::size_t head = 0; head < r.vertices.size(); ++head) {
    const VertexId v = r.vertices[head];
    if (w.touches_boundary(v)) r.reached_boundary = true;
    for (VertexId y : w.graph().neighbors(v)) {
      if (seen[y] || w.is_boundary(y) || !c.observed.contains(y) || !c.vacant(y)) continue;
      seen[y] = 1;
      r.vertices.push_back(y);
    }
  }
  r.size = r.vertices.size();
  std::sort(r.vertices.begin(), r.vertices.end());
  return r;
}

ClusterProbe::ClusterProbe(const Window& w, VertexId origin)
    : window_(&w), origin_(origin), sampler_(w, w.interior_set()) {
  if (origin >= w.size() || w.is_boundary(origin)) {
    throw std::invalid_argument("cluster origin must be an interior vertex");
  }
  distance_ = bfs_distances(w.graph(), origin);
  boundary_distance_ = std::numeric_limits<int>::max();
  for (VertexId b : w.boundary()) boundary_distance_ = std::min(boundary_distance_, distance_[b]);
  inner_radius_ = (boundary_distance_ - 1) / 2;
}

ClusterProbe::Outcome ClusterProbe::run(double u, Rng& rng, Workspace& ws) const {
  const Window& w = *window_;
  const std::size_t n = w.size();
  ws.occupied.reset(n);
  sampler_.occupy(u, rng, ws.occupied);

  Outcome out;
  if (ws.occupied.occupied(origin_)) return out;
  ws.visited.reset(n);
  ws.queue.clear();
  ws.queue.push_back(origin_);
  ws.visited.occupy(origin_);
  const int inner = inner_radius_;
  const int outer = 2 * inner_radius_;
  for (std::size_t head = 0; head < ws.queue.size(); ++head) {
    const VertexId v = ws.queue[head];
    if (w.touches_boundary(v)) out.reached_boundary = true;
    const int d = distance_[v];
    if (d == inner) ++out.inner_shell;
    if (d == outer) ++out.outer_shell;
    for (VertexId y : w.graph().neighbors(v)) {
      if (w.is_boundary(y) || ws.occupied.occupied(y) || ws.visited.occupied(y)) continue;
      ws.visited.occupy(y);
      ws.queue.push_back(y);
    }
  }
  out.size = static_cast<std::uint32_t>(ws.queue.size());
  return out;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Percolating: return "percolating";
    case Verdict::Null: return "null";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

EtaEstimate eta_mc(const Window& w, VertexId x, double u, std::uint64_t trials, std::uint64_t seed, int threads) {
  if (trials == 0) throw std::invalid_argument("eta_mc needs trials >= 1");
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  const ClusterProbe probe(w, x);
  struct Count {
    std::uint64_t reached = 0;
    void merge(const Count& o) { reached += o.reached; }
  };
  const Count total = parallel_trials<Count>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Count& acc) {
    ClusterProbe::Workspace ws;
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      if (probe.run(u, rng, ws).reached_boundary) ++acc.reached;
    }
  });
  const Proportion p{total.reached, trials};
  EtaEstimate e;
  e.u = u;
  e.origin = x;
  e.probability = p.estimate();
  e.stderr_ = p.stderr_();
  e.trials = trials;
  e.successes = total.reached;
  e.radius = probe.boundary_distance();
  return e;
}

UstarProbe classify_level(const ClusterProbe& probe, double u, std::uint64_t trials, std::uint64_t seed,
                          double confidence, int threads) {
  if (trials < 2) throw std::invalid_argument("classify_level needs trials >= 2");
  if (probe.inner_radius() < 1) {
    throw std::invalid_argument("window too small for radius doubling: origin must be >= 3 from the boundary");
  }
  struct Acc {
    IntegerMoments growth;
    std::uint64_t reached = 0;
    std::uint64_t inner = 0;
    std::uint64_t outer = 0;
    void merge(const Acc& o) {
      growth.merge(o.growth);
      reached += o.reached;
      inner += o.inner;
      outer += o.outer;
    }
  };
  const Acc acc = parallel_trials<Acc>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Acc& a) {
    ClusterProbe::Workspace ws;
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      const auto o = probe.run(u, rng, ws);
      a.growth.add(static_cast<std::int64_t>(o.outer_shell) - static_cast<std::int64_t>(o.inner_shell));
      if (o.reached_boundary) ++a.reached;
      if (o.inner_shell > 0) ++a.inner;
      if (o.outer_shell > 0) ++a.outer;
    }
  });

  UstarProbe p;
  p.u = u;
  p.growth_mean = acc.growth.mean();
  p.growth_stderr = acc.growth.stderr_of_mean();
  const Proportion reached{acc.reached, trials};
  p.eta.u = u;
  p.eta.origin = probe.origin();
  p.eta.probability = reached.estimate();
  p.eta.stderr_ = reached.stderr_();
  p.eta.trials = trials;
  p.eta.successes = acc.reached;
  p.eta.radius = probe.boundary_distance();
  p.eta_inner = static_cast<double>(acc.inner) / static_cast<double>(trials);
  p.eta_outer = static_cast<double>(acc.outer) / static_cast<double>(trials);

  const double z = normal_quantile_two_sided(confidence);
  if (acc.inner == 0 && acc.outer == 0) {
    p.verdict = Verdict::Null;  // the cluster never got as far as radius r
  } else if (p.growth_mean - z * p.growth_stderr > 0.0) {
    p.verdict = Verdict::Percolating;
  } else if (p.growth_mean + z * p.growth_stderr < 0.0) {
    p.verdict = Verdict::Null;
  } else {
    p.verdict = Verdict::Inconclusive;
  }
  return p;
}

UstarBracket estimate_ustar(const Window& w, VertexId x, double u_lo, double u_hi, std::uint64_t trials,
                            std::uint64_t seed, const UstarOptions& opts) {
  if (!(u_lo < u_hi)) throw std::invalid_argument("estimate_ustar needs u_lo < u_hi");
  if (u_lo < 0.0) throw std::invalid_argument("levels must be >= 0");
  const ClusterProbe probe(w, x);

  UstarBracket b;
  b.confidence = opts.confidence;
  b.radii_checked = {probe.inner_radius(), probe.outer_radius()};
  std::uint64_t probe_index = 0;
  auto classify = [&](double u) {
    b.probes.push_back(classify_level(probe, u, trials, Rng::derive(seed, probe_index++), opts.confidence,
                                      opts.threads));
    return b.probes.back().verdict;
  };

  const Verdict at_lo = classify(u_lo);
  const Verdict at_hi = classify(u_hi);
  if (at_lo != Verdict::Percolating || at_hi != Verdict::Null) {
    std::string msg = "bracket failure: u_lo=" + std::to_string(u_lo) + " is " + to_string(at_lo) +
                      ", u_hi=" + std::to_string(u_hi) + " is " + to_string(at_hi);
    if (at_lo == Verdict::Percolating && at_hi == Verdict::Percolating) msg += " (both ends percolate)";
    if (at_lo == Verdict::Null && at_hi == Verdict::Null) msg += " (both ends null)";
    throw BracketError(msg, b.probes);
  }

  b.lo = u_lo;
  b.hi = u_hi;
  b.stop_reason = "max_iterations";
  for (b.iterations = 0; b.iterations < opts.max_iterations; ++b.iterations) {
    if (b.hi - b.lo < opts.min_width) {
      b.stop_reason = "width";
      break;
    }
    const double mid = 0.5 * (b.lo + b.hi);
    const Verdict v = classify(mid);
    if (v == Verdict::Percolating) {
      b.lo = mid;
    } else if (v == Verdict::Null) {
      b.hi = mid;
    } else {
      ++b.iterations;
      b.stop_reason = "inconclusive";
      break;
    }
  }
  if (b.stop_reason == "max_iterations" && b.hi - b.lo < opts.min_width) b.stop_reason = "width";
  return b;
}

CoupledEtaReport coupled_eta_monotonicity(const Window& w, VertexId x, std::vector<double> levels,
                                          std::uint64_t samples, std::uint64_t seed) {
  if (levels.empty()) throw std::invalid_argument("need at least one level");
  std::sort(levels.begin(), levels.end());
  if (levels.front() < 0.0) throw std::invalid_argument("levels must be >= 0");
  const InterlacementSampler sampler(w, w.interior_set());
  CoupledEtaReport r;
  r.levels = levels;
  r.reached.assign(levels.size(), 0);
  r.samples = samples;
  for (std::uint64_t t = 0; t < samples; ++t) {
    Rng rng = Rng::stream(seed, t);
    const InterlacementSample top = sampler.sample(levels.back(), rng);
    bool previous = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const bool reached = cluster_of(vacant_configuration(restrict_to_level(top, levels[i])), x).reached_boundary;
      if (reached) ++r.reached[i];
      if (reached && !previous) ++r.violations;
      previous = reached;
    }
  }
  return r;
}

double peierls_threshold(int q_degree, double beta, double m) {
  if (q_degree < 1 || !(beta > 0.0) || !(m > 0.0)) {
    throw std::invalid_argument("peierls_threshold needs q >= 1, beta > 0, m > 0");
  }
  return std::log(static_cast<double>(q_degree)) / (beta * m);
}

std::vector<double> peierls_bound_curve(int q_degree, double beta, double m, double u, int n_max) {
  if (q_degree < 1 || !(beta > 0.0) || !(m > 0.0) || u < 0.0 || n_max < 1) {
    throw std::invalid_argument("peierls_bound_curve needs positive parameters");
  }
  // Computed as exp(n (log q - beta u m)) so the threshold case is exactly 1.
  const double rate = std::log(static_cast<double>(q_degree)) - beta * u * m;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(std::exp(rate * n));
  return out;
}

}  // namespace interlace
