#include "interlace/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "interlace/parallel.hpp"

namespace interlace {

InterlacementSampler::InterlacementSampler(const Window& w, VertexSet sampling_set, const SolverOptions& opts)
    : window_(&w), set_(std::move(sampling_set)), eq_(equilibrium_measure(w, set_, opts)) {
  double running = 0.0;
  for (VertexId x : eq_.support) {
    if (eq_.mass[x] <= 0.0) continue;
    running += eq_.mass[x];
    starts_.push_back(x);
    start_weights_.push_back(running);
  }
  for (double& c : start_weights_) c /= running;
  if (!start_weights_.empty()) start_weights_.back() = 1.0;
}

template <class Visit>
std::uint64_t InterlacementSampler::draw(double u, Rng& rng, Visit&& on_trajectory) const {
  if (u < 0.0 || !std::isfinite(u)) throw std::invalid_argument("level u must be finite and >= 0");
  const double mean = u * eq_.total;
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> count(mean);
  const std::uint64_t n = count(rng);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto it = std::upper_bound(start_weights_.begin(), start_weights_.end(), rng.uniform());
    const VertexId start = starts_[std::min<std::size_t>(static_cast<std::size_t>(it - start_weights_.begin()),
                                                         starts_.size() - 1)];
    const double mark = u * rng.uniform();
    on_trajectory(start, mark);
  }
  return n;
}

InterlacementSample InterlacementSampler::sample(double u, Rng& rng) const {
  InterlacementSample s;
  s.window = window_;
  s.sampling_set = set_;
  s.level = u;
  const StopRule stop = StopRule::until_escape();
  draw(u, rng, [&](VertexId start, double mark) {
    MarkedTrajectory t;
    t.mark = mark;
    t.path.terminal = walk(*window_, start, rng, stop, [&](VertexId v) { t.path.vertices.push_back(v); });
    if (t.path.terminal == Terminal::Killed) throw std::runtime_error("interlacement walk exhausted its step budget");
    s.trajectories.push_back(std::move(t));
  });
  return s;
}

std::uint64_t InterlacementSampler::occupy(double u, Rng& rng, OccupancyMap& occupancy) const {
  const StopRule stop = StopRule::until_escape();
  return draw(u, rng, [&](VertexId start, double) {
    if (walk(*window_, start, rng, stop, [&](VertexId v) { occupancy.occupy(v); }) == Terminal::Killed) {
      throw std::runtime_error("interlacement walk exhausted its step budget");
    }
  });
}

InterlacementSample sample_interlacement(const Window& w, const VertexSet& k, double u, std::uint64_t seed) {
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  InterlacementSampler sampler(w, k);
  Rng rng = Rng::stream(seed, 0);
  return sampler.sample(u, rng);
}

VacantConfiguration vacant_configuration(const InterlacementSample& s) {
  VacantConfiguration c;
  c.window = s.window;
  c.observed = s.sampling_set;
  c.bits.assign(s.window != nullptr ? s.window->size() : 0, 1);
  for (const auto& t : s.trajectories) {
    if (t.mark > s.level) continue;
    for (VertexId v : t.path.vertices) c.bits[v] = 0;
  }
  return c;
}

InterlacementSample restrict_to_level(const InterlacementSample& s, double new_level) {
  if (new_level < 0.0 || new_level > s.level) {
    throw std::invalid_argument("restrict_to_level needs 0 <= u' <= u");
  }
  InterlacementSample out;
  out.window = s.window;
  out.sampling_set = s.sampling_set;
  out.level = new_level;
  for (const auto& t : s.trajectories) {
    if (t.mark <= new_level) out.trajectories.push_back(t);
  }
  return out;
}

double vacancy_probability_exact(const Window& w, const VertexSet& k, double u) {
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  if (u == 0.0) return 1.0;
  return std::exp(-u * capacity(w, k));
}

McEstimate vacancy_probability_mc(const Window& w, const VertexSet& k, double u, std::uint64_t trials,
                                  std::uint64_t seed, int threads) {
  if (trials == 0) throw std::invalid_argument("vacancy_probability_mc needs trials >= 1");
  if (u < 0.0) throw std::invalid_argument("level u must be >= 0");
  if (u == 0.0) return {1.0, 0.0, trials, trials};
  const InterlacementSampler sampler(w, k);
  struct Count {
    std::uint64_t vacant = 0;
    void merge(const Count& o) { vacant += o.vacant; }
  };
  const Count total = parallel_trials<Count>(trials, threads, [&](std::uint64_t first, std::uint64_t last, Count& acc) {
    OccupancyMap occ(w.size());
    for (std::uint64_t t = first; t < last; ++t) {
      Rng rng = Rng::stream(seed, t);
      occ.reset(w.size());
      sampler.occupy(u, rng, occ);
      const auto members = k.members();
      if (std::none_of(members.begin(), members.end(), [&](VertexId x) { return occ.occupied(x); })) {
        ++acc.vacant;
      }
    }
  });
  Proportion p{total.vacant, trials};
  return {p.estimate(), p.stderr_(), trials, total.vacant};
}

}  // namespace interlace
