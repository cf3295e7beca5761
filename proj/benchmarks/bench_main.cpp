#include <benchmark/benchmark.h>

#include "interlace/builders.hpp"
#include "interlace/percolation.hpp"
#include "interlace/potential.hpp"
#include "interlace/sampler.hpp"
#include "interlace/walk.hpp"

using namespace interlace;

static void bm_walk_to_escape(benchmark::State& state) {
  const Window w = build_lattice_ball(3, static_cast<int>(state.range(0)));
  std::uint64_t t = 0;
  std::uint64_t steps = 0;
  for (auto _ : state) {
    Rng rng = Rng::stream(1, t++);
    walk(w, 0, rng, StopRule::until_escape(), [&](VertexId) { ++steps; });
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(bm_walk_to_escape)->Arg(4)->Arg(8)->Arg(16);

static void bm_escape_solve(benchmark::State& state) {
  const Window w = build_lattice_ball(3, static_cast<int>(state.range(0)));
  const VertexSet origin(w.size(), {0});
  for (auto _ : state) benchmark::DoNotOptimize(capacity(w, origin));
}
BENCHMARK(bm_escape_solve)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void bm_occupy_tree(benchmark::State& state) {
  const Window w = build_regular_tree(3, static_cast<int>(state.range(0)), 1.0 / 3);
  const InterlacementSampler sampler(w, w.interior_set());
  OccupancyMap occ(w.size());
  std::uint64_t t = 0;
  for (auto _ : state) {
    Rng rng = Rng::stream(2, t++);
    occ.reset(w.size());
    sampler.occupy(3.0, rng, occ);
  }
}
BENCHMARK(bm_occupy_tree)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

static void bm_cluster_probe(benchmark::State& state) {
  const Window w = build_regular_tree(3, static_cast<int>(state.range(0)), 1.0 / 3);
  const ClusterProbe probe(w, 0);
  ClusterProbe::Workspace ws;
  std::uint64_t t = 0;
  for (auto _ : state) {
    Rng rng = Rng::stream(3, t++);
    benchmark::DoNotOptimize(probe.run(4.0, rng, ws));
  }
}
BENCHMARK(bm_cluster_probe)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
