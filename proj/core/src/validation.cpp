#include "interlace/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "interlace/builders.hpp"
#include "interlace/parallel.hpp"
#include "interlace/potential.hpp"
#include "interlace/sampler.hpp"

namespace interlace {

EventSpec EventSpec::pattern(std::vector<std::pair<VertexId, bool>> constraints) {
  std::vector<VertexId> seen;
  for (const auto& [v, bit] : constraints) seen.push_back(v);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("event constrains a vertex twice");
  }
  EventSpec e;
  e.kind = Kind::Pattern;
  e.increasing = std::all_of(constraints.begin(), constraints.end(), [](const auto& c) { return c.second; });
  e.constraints = std::move(constraints);
  return e;
}

EventSpec EventSpec::all_vacant(const std::vector<VertexId>& vertices) {
  std::vector<std::pair<VertexId, bool>> c;
  for (VertexId v : vertices) c.emplace_back(v, true);
  return pattern(std::move(c));
}

EventSpec EventSpec::cluster_reaches_boundary(VertexId origin) {
  EventSpec e;
  e.kind = Kind::ClusterReachesBoundary;
  e.origin = origin;
  e.increasing = true;
  return e;
}

FkgCapacityReport fkg_capacity_check(const Window& w, const VertexSet& k1, const VertexSet& k2, double u) {
  if (k1.empty() || k2.empty()) throw std::invalid_argument("fkg_capacity_check needs nonempty sets");
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  FkgCapacityReport r;
  r.cap1 = capacity(w, k1);
  r.cap2 = capacity(w, k2);
  r.cap_union = capacity(w, k1.united(k2));
  r.slack = u * (r.cap1 + r.cap2 - r.cap_union);
  r.pass = r.cap_union <= (r.cap1 + r.cap2) * (1.0 + 1e-10);
  return r;
}

namespace {

void check_event(const Window& w, const EventSpec& e) {
  if (!e.increasing) throw std::invalid_argument("fkg_mc_check needs increasing events");
  if (e.kind == EventSpec::Kind::Pattern) {
    if (e.constraints.empty()) throw std::invalid_argument("pattern event is empty");
    for (const auto& [v, bit] : e.constraints) {
      if (v >= w.size() || w.is_boundary(v)) throw std::invalid_argument("event vertex must be interior");
      if (!bit) throw std::invalid_argument("fkg_mc_check needs increasing events");
    }
  } else if (e.origin >= w.size() || w.is_boundary(e.origin)) {
    throw std::invalid_argument("cluster origin must be an interior vertex");
  }
}

struct EventEvaluator {
  const Window& w;
  OccupancyMap visited;
  std::vector<VertexId> queue;

  bool holds(const EventSpec& e, const OccupancyMap& occ) {
    if (e.kind == EventSpec::Kind::Pattern) {
      return std::all_of(e.constraints.begin(), e.constraints.end(),
                         [&](const auto& c) { return occ.occupied(c.first) != c.second; });
    }
    if (occ.occupied(e.origin)) return false;
    visited.reset(w.size());
    queue.assign(1, e.origin);
    visited.occupy(e.origin);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      if (w.touches_boundary(v)) return true;
      for (VertexId y : w.graph().neighbors(v)) {
        if (w.is_boundary(y) || occ.occupied(y) || visited.occupied(y)) continue;
        visited.occupy(y);
        queue.push_back(y);
      }
    }
    return false;
  }
};

}  // namespace

FkgMcReport fkg_mc_check(const Window& w, double u, const EventSpec& e1, const EventSpec& e2, std::uint64_t trials,
                         std::uint64_t seed, int threads) {
  if (trials < 2) throw std::invalid_argument("fkg_mc_check needs trials >= 2");
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  check_event(w, e1);
  check_event(w, e2);

  std::vector<VertexId> k;
  const bool needs_interior =
      e1.kind == EventSpec::Kind::ClusterReachesBoundary || e2.kind == EventSpec::Kind::ClusterReachesBoundary;
  if (needs_interior) {
    k.assign(w.interior().begin(), w.interior().end());
  } else {
    for (const EventSpec* e : {&e1, &e2}) {
      for (const auto& c : e->constraints) k.push_back(c.first);
    }
  }
  const InterlacementSampler sampler(w, VertexSet(w.size(), k));

  struct Cells {
    std::array<std::uint64_t, 4> n{};  // index a + 2b
    void merge(const Cells& o) {
      for (int i = 0; i < 4; ++i) n[i] += o.n[i];
    }
  };
  const Cells cells = parallel_trials<Cells>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Cells& acc) {
    OccupancyMap occ(w.size());
    EventEvaluator eval{w, OccupancyMap(w.size()), {}};
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      occ.reset(w.size());
      sampler.occupy(u, rng, occ);
      const int a = eval.holds(e1, occ) ? 1 : 0;
      const int b = eval.holds(e2, occ) ? 1 : 0;
      ++acc.n[a + 2 * b];
    }
  });

  const double n = static_cast<double>(trials);
  FkgMcReport r;
  r.trials = trials;
  r.seed = seed;
  r.p1 = (cells.n[1] + cells.n[3]) / n;
  r.p2 = (cells.n[2] + cells.n[3]) / n;
  r.p12 = cells.n[3] / n;
  r.covariance = r.p12 - r.p1 * r.p2;
  // Influence function of the covariance: (A - p1)(B - p2) - cov.
  double second = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double phi = (a - r.p1) * (b - r.p2);
      second += cells.n[a + 2 * b] / n * phi * phi;
    }
  }
  r.stderr_ = std::sqrt(std::max(0.0, second - r.covariance * r.covariance) / n);
  r.pass = r.covariance >= -3.0 * r.stderr_;
  return r;
}

bool structurally_impossible(const WeightedGraph& g, const std::vector<std::pair<VertexId, bool>>& pattern) {
  auto state = [&](VertexId v) -> int {
    for (const auto& [x, bit] : pattern) {
      if (x == v) return bit ? 1 : 0;
    }
    return -1;
  };
  for (const auto& [v, bit] : pattern) {
    if (v >= g.size()) throw std::invalid_argument("pattern vertex out of range");
    if (bit) continue;
    const auto nb = g.neighbors(v);
    if (std::all_of(nb.begin(), nb.end(), [&](VertexId y) { return state(y) == 1; })) return true;
  }
  return false;
}

const NamedEstimate& CounterexampleReport::estimate(const std::string& name) const {
  for (const auto& e : estimates) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no estimate named " + name);
}

namespace {

int pattern_index(const Pattern4& y) { return y[0] + 2 * y[1] + 4 * y[2] + 8 * y[3]; }

std::vector<std::pair<VertexId, bool>> as_constraints(const Pattern4& y) {
  std::vector<std::pair<VertexId, bool>> c;
  for (VertexId v = 0; v < 4; ++v) c.emplace_back(v, y[v] == 1);
  return c;
}

std::string pattern_name(const Pattern4& y) {
  return "(" + std::to_string(y[0]) + "," + std::to_string(y[1]) + "," + std::to_string(y[2]) + "," +
         std::to_string(y[3]) + ")";
}

NamedEstimate make_estimate(std::string name, std::uint64_t count, std::uint64_t trials, double confidence) {
  NamedEstimate e;
  e.name = std::move(name);
  e.count = count;
  e.trials = trials;
  const Proportion p{count, trials};
  e.estimate = p.estimate();
  e.stderr_ = p.stderr_();
  e.wilson = trials == 0 ? Interval{0.0, 1.0} : wilson_interval(count, trials, confidence);
  return e;
}

CounterexampleReport base_report(const char* which, double u, std::uint64_t trials, std::uint64_t seed, int n_max) {
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  if (trials == 0) throw std::invalid_argument("counterexample checks need trials >= 1");
  CounterexampleReport r;
  r.which = which;
  r.u = u;
  r.trials = trials;
  r.seed = seed;
  r.n_max = n_max;
  return r;
}

constexpr Pattern4 kImpossible{1, 0, 1, 0};

}  // namespace

std::vector<std::uint64_t> remark33_pattern_counts(double u, std::uint64_t trials, std::uint64_t seed, int n_max,
                                                   int threads, std::uint64_t* trajectory_violations) {
  const Window w = build_remark33_graph(n_max);
  const InterlacementSampler sampler(w, VertexSet(w.size(), {0, 1, 2, 3}));
  struct Acc {
    std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(16, 0);
    std::uint64_t violations = 0;
    void merge(const Acc& o) {
      for (int i = 0; i < 16; ++i) counts[i] += o.counts[i];
      violations += o.violations;
    }
  };
  const Acc acc = parallel_trials<Acc>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Acc& a) {
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      const InterlacementSample s = sampler.sample(u, rng);
      Pattern4 y{1, 1, 1, 1};
      for (const auto& traj : s.trajectories) {
        std::array<bool, 4> seen{};
        for (VertexId v : traj.path.vertices) {
          if (v < 4) seen[v] = true;
        }
        if (seen[1] && !seen[0] && !seen[2]) ++a.violations;
        for (int i = 0; i < 4; ++i) {
          if (seen[i]) y[i] = 0;
        }
      }
      ++a.counts[pattern_index(y)];
    }
  });
  if (trajectory_violations != nullptr) *trajectory_violations = acc.violations;
  return acc.counts;
}

CounterexampleReport remark33_impossible_configuration(double u, std::uint64_t trials, std::uint64_t seed, int n_max,
                                                       int threads) {
  CounterexampleReport r = base_report("impossible", u, trials, seed, n_max);
  const auto counts = remark33_pattern_counts(u, trials, seed, n_max, threads, &r.trajectory_violations);
  const Window w = build_remark33_graph(n_max);
  r.structural_zero = structurally_impossible(w.graph(), as_constraints(kImpossible));
  for (const Pattern4& y : {kImpossible, Pattern4{0, 0, 1, 0}, Pattern4{1, 0, 0, 0}}) {
    r.estimates.push_back(make_estimate(pattern_name(y), counts[pattern_index(y)], trials, r.confidence));
  }
  const bool never_sampled = counts[pattern_index(kImpossible)] == 0;
  r.verdict = r.structural_zero && never_sampled && r.trajectory_violations == 0 ? "impossible" : "contradiction";
  return r;
}

CounterexampleReport lattice_condition_violation(double u, std::uint64_t trials, std::uint64_t seed, int n_max,
                                                 int threads) {
  CounterexampleReport r = base_report("lattice", u, trials, seed, n_max);
  const Pattern4 eta{0, 0, 1, 0};
  const Pattern4 zeta{1, 0, 0, 0};
  Pattern4 join{}, meet{};
  for (int i = 0; i < 4; ++i) {
    join[i] = std::max(eta[i], zeta[i]);
    meet[i] = std::min(eta[i], zeta[i]);
  }
  const auto counts = remark33_pattern_counts(u, trials, seed, n_max, threads, &r.trajectory_violations);
  const Window w = build_remark33_graph(n_max);
  r.structural_zero = structurally_impossible(w.graph(), as_constraints(join));
  r.estimates.push_back(make_estimate("eta", counts[pattern_index(eta)], trials, r.confidence));
  r.estimates.push_back(make_estimate("zeta", counts[pattern_index(zeta)], trials, r.confidence));
  r.estimates.push_back(make_estimate("eta_join_zeta", counts[pattern_index(join)], trials, r.confidence));
  r.estimates.push_back(make_estimate("eta_meet_zeta", counts[pattern_index(meet)], trials, r.confidence));

  // eta and zeta are exchanged by the graph automorphism 0 <-> 2.
  const double pe = r.estimate("eta").estimate;
  const double pz = r.estimate("zeta").estimate;
  const double var = (pe + pz - (pe - pz) * (pe - pz)) / static_cast<double>(trials);
  r.symmetry_z = var > 0.0 ? (pe - pz) / std::sqrt(var) : 0.0;

  if (u == 0.0) {
    r.verdict = "vacuous";
  } else if (r.structural_zero && counts[pattern_index(join)] == 0 && r.estimate("eta").wilson.lo > 0.0 &&
             r.estimate("zeta").wilson.lo > 0.0 && r.estimate("eta").count > 0 && r.estimate("zeta").count > 0) {
    r.verdict = "violated";
  } else {
    r.verdict = "inconclusive";
  }
  return r;
}

CounterexampleReport markov_field_violation(double u, std::uint64_t trials, std::uint64_t seed,
                                            bool monotone_conditional, int n_max, int threads) {
  CounterexampleReport r = base_report(monotone_conditional ? "monotone-cond" : "markov", u, trials, seed, n_max);
  const auto counts = remark33_pattern_counts(u, trials, seed, n_max, threads, &r.trajectory_violations);
  const Window w = build_remark33_graph(n_max);
  r.structural_zero = structurally_impossible(w.graph(), as_constraints(kImpossible));

  // Target bit, and the two conditionings on the other three bits.
  const int target = monotone_conditional ? 0 : 2;
  const std::array<int, 3> others = monotone_conditional ? std::array<int, 3>{1, 2, 3} : std::array<int, 3>{0, 1, 3};
  const std::array<int, 3> cond_positive = {0, 0, 0};
  const std::array<int, 3> cond_zero = monotone_conditional ? std::array<int, 3>{0, 1, 0} : std::array<int, 3>{1, 0, 0};

  auto conditional = [&](const std::array<int, 3>& cond, const std::string& name) {
    std::uint64_t given = 0, hit = 0;
    for (int idx = 0; idx < 16; ++idx) {
      Pattern4 y{};
      for (int i = 0; i < 4; ++i) y[i] = (idx >> i) & 1;
      if (y[others[0]] != cond[0] || y[others[1]] != cond[1] || y[others[2]] != cond[2]) continue;
      given += counts[idx];
      if (y[target] == 1) hit += counts[idx];
    }
    r.estimates.push_back(make_estimate(name + "_condition", given, trials, r.confidence));
    r.estimates.push_back(make_estimate(name, hit, given, r.confidence));
    return std::pair{given, hit};
  };
  const std::string y_target = "Y" + std::to_string(target);
  const auto [given_pos, hit_pos] = conditional(cond_positive, y_target + "_given_000");
  const auto [given_zero, hit_zero] =
      conditional(cond_zero, y_target + "_given_" + std::to_string(cond_zero[0]) + std::to_string(cond_zero[1]) +
                                 std::to_string(cond_zero[2]));

  if (given_pos == 0 || given_zero == 0) {
    r.verdict = "inconclusive";
  } else if (r.structural_zero && hit_zero == 0 && hit_pos > 0 &&
             wilson_interval(hit_pos, given_pos, r.confidence).lo > 0.0) {
    r.verdict = "fails";
  } else {
    r.verdict = "inconclusive";
  }
  return r;
}

}  // namespace interlace
