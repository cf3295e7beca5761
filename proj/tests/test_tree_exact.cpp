#include <doctest.h>

#include <cmath>

#include "interlace/builders.hpp"
#include "interlace/potential.hpp"
#include "interlace/stats.hpp"
#include "interlace/tree_exact.hpp"
#include "interlace/walk.hpp"
#include "support.hpp"

using namespace interlace;

namespace {

// 0 - 1 - 3 with leaves hanging off each interior vertex; leaves are
// boundary vertices with uneven return probabilities.
Window lopsided_tree() {
  const std::vector<Edge> edges{{0, 1, 1.0}, {0, 2, 2.0}, {1, 3, 0.5}, {1, 4, 3.0}, {3, 5, 1.5}, {3, 6, 0.7}};
  return Window(WeightedGraph::from_edges(7, edges), {2, 4, 5, 6}, {0.3, 0.5, 0.2, 0.6}, "lopsided");
}

}  // namespace

TEST_CASE("rooted tree structure") {
  const Window w = build_regular_tree(3, 3, 1.0 / 3);
  const TreeRooted t(w, 0);
  CHECK(t.parent(0) == 0);
  CHECK(t.depth(0) == 0);
  for (VertexId z = 1; z < w.size(); ++z) {
    CHECK(t.depth(z) == t.depth(t.parent(z)) + 1);
    CHECK(w.graph().adjacent(z, t.parent(z)));
  }
  for (std::size_t i = 1; i < t.order().size(); ++i) CHECK(t.depth(t.order()[i - 1]) <= t.depth(t.order()[i]));

  CHECK_THROWS_AS(TreeRooted(w, w.boundary()[0]), GraphError);
  const WeightedGraph cycle = WeightedGraph::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  const Window looped(cycle, {2}, {0.0}, "cycle");
  CHECK_THROWS_AS(TreeRooted(looped, 0), GraphError);
}

TEST_CASE("parent hitting probabilities on regular trees") {
  for (int d : {3, 4, 5}) {
    const Window w = build_regular_tree(d, 5, 1.0 / d);
    const TreeRooted t(w, 0);
    const auto x = hit_parent_probabilities(t);
    CHECK(x[0] == 0.0);
    for (VertexId z = 1; z < w.size(); ++z) CHECK(x[z] == doctest::Approx(1.0 / (d - 1)).epsilon(1e-12));
  }
}

TEST_CASE("parent hitting at leaves") {
  // interior leaf: the only way out is back up
  const WeightedGraph g = WeightedGraph::from_edges(4, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}});
  const Window w(g, {3}, {0.0}, "leaf");
  const TreeRooted t(w, 0);
  const auto x = hit_parent_probabilities(t);
  CHECK(x[2] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[3] == 0.0);
}

TEST_CASE("coupling values on regular trees") {
  for (int d : {3, 4, 5, 6}) {
    const Window w = build_regular_tree(d, 5, 1.0 / d);
    const TreeRooted t(w, 0);
    const CouplingTable table = coupling_f(t);
    CHECK_FALSE(table.approximate);
    const double expected = static_cast<double>((d - 2) * (d - 2)) / (d * (d - 1));
    for (VertexId z : w.interior()) {
      if (z != 0) CHECK(std::abs(table.f[z] - expected) <= 1e-12);
    }
    for (VertexId b : w.boundary()) CHECK(table.f[b] == 0.0);
    CHECK(std::abs(table.f[0] - capacity(w, VertexSet(w.size(), {0}))) <= 1e-10);
    const auto open = table.open_probability(2.0);
    CHECK(open[1] == doctest::Approx(regular_tree_open_probability(d, 2.0)).epsilon(1e-12));
    CHECK(open[0] == doctest::Approx(regular_tree_root_open_probability(d, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("coupling flags approximate boundaries") {
  const Window regular = build_regular_tree(3, 4, 1.0 / 3);
  CHECK_FALSE(coupling_f(TreeRooted(regular, 0)).approximate);
  const Window lopsided = lopsided_tree();
  CHECK(coupling_f(TreeRooted(lopsided, 0)).approximate);
  const WeightedGraph g = WeightedGraph::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}});
  const Window killed(g, {1, 2}, {0.0, 0.0}, "kill");
  CHECK(coupling_f(TreeRooted(killed, 0)).approximate);
}

TEST_CASE("coupling factors match walk path events on an irregular tree") {
  const Window w = lopsided_tree();
  const TreeRooted t(w, 0);
  const CouplingTable table = coupling_f(t);
  CHECK(table.f[0] == doctest::Approx(capacity(w, VertexSet(w.size(), {0}))).epsilon(1e-10));

  const std::uint64_t n = 100000;
  for (VertexId z : {1u, 3u}) {
    std::uint64_t down = 0, avoid = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      Rng rng = Rng::stream(500 + z, i);
      const Trajectory path = run_walk(w, z, rng, StopRule::until_escape());
      bool stays_below = path.vertices.size() > 1;
      bool misses_parent = true;
      for (std::size_t k = 1; k < path.vertices.size(); ++k) {
        stays_below = stays_below && t.depth(path.vertices[k]) > t.depth(z);
        misses_parent = misses_parent && path.vertices[k] != t.parent(z);
      }
      down += stays_below;
      avoid += misses_parent;
    }
    const Proportion pd{down, n};
    const Proportion pa{avoid, n};
    CHECK(testing::within_se(pd.estimate(), table.escape_down[z], pd.stderr_()));
    CHECK(testing::within_se(pa.estimate(), table.avoid_parent[z], pa.stderr_()));
    CHECK(table.f[z] == doctest::Approx(table.escape_down[z] * w.graph().mu(z) * table.avoid_parent[z]));
  }
}

TEST_CASE("bernoulli cluster sampling") {
  const Window w = build_regular_tree(3, 5, 1.0 / 3);
  const TreeRooted t(w, 0);
  const ClusterReport full = bernoulli_cluster_sample(t, 0.0, 1);
  CHECK(full.size == w.interior().size());
  CHECK(full.reached_boundary);

  // u * min f = 80 / 6 * 3 = 40
  const CouplingTable table = coupling_f(t);
  std::uint64_t empty = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = Rng::stream(3, i);
    empty += bernoulli_cluster_sample(t, table, 240.0, rng).size == 0;
  }
  CHECK(empty == 1000);

  const std::uint64_t n = 100000;
  std::uint64_t closed = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(4, i);
    closed += bernoulli_cluster_sample(t, table, 2.0, rng).size == 0;
  }
  const Proportion p{closed, n};
  CHECK(testing::within_se(p.estimate(), 1.0 - std::exp(-1.0), p.stderr_()));
}

TEST_CASE("cluster law equivalence on small trees") {
  const Window w = build_regular_tree(3, 6, 1.0 / 3);
  const TreeRooted t(w, 0);
  const EquivalenceReport zero = cluster_law_equivalence_test(t, 0.0, 10000, 1);
  CHECK(zero.tv == 0.0);
  CHECK(zero.pass);

  const EquivalenceReport r = cluster_law_equivalence_test(t, 2.0, 10000, 2);
  CHECK(r.pass);
  CHECK(r.threshold == doctest::Approx(4.0 * std::sqrt(30.0 / 10000)));
  CHECK(r.interlacement_histogram.size() == static_cast<std::size_t>(kHistogramCap + 1));
  CHECK_THROWS(cluster_law_equivalence_test(t, 2.0, 9999, 2));
}

TEST_CASE("critical value closed form") {
  CHECK(regular_tree_ustar(3) == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(regular_tree_ustar(3) == doctest::Approx(4.158883).epsilon(1e-6));
  CHECK(regular_tree_ustar(4) == doctest::Approx(3.295837).epsilon(1e-6));
  // u* grows like ln d
  CHECK(std::abs(regular_tree_ustar(1000) / std::log(1000.0) - 1.0) < 0.02);
  CHECK_THROWS(regular_tree_ustar(2));
  CHECK_THROWS(branching_mean(2, 1.0));

  for (int d = 3; d <= 10; ++d) {
    CHECK(branching_mean(d, 0.0) == d - 1);
    CHECK(std::abs(branching_mean(d, regular_tree_ustar(d)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("eta closed form") {
  for (int d : {3, 4, 5}) {
    const double ustar = regular_tree_ustar(d);
    CHECK(regular_tree_eta(d, 0.0) == 1.0);
    CHECK(regular_tree_eta(d, ustar) == 0.0);
    CHECK(regular_tree_eta(d, ustar + 1.0) == 0.0);
    CHECK(regular_tree_eta(d, ustar - 0.01) > 0.0);
    CHECK(regular_tree_eta(d, ustar - 1e-6) < 1e-3);
    double previous = 1.0;
    for (double u = 0.0; u <= ustar + 0.5; u += 0.05) {
      const double eta = regular_tree_eta(d, u);
      CHECK(eta <= previous + 1e-12);
      previous = eta;
    }
  }
  const FixedPointResult sub = regular_tree_extinction(3, 5.0);
  CHECK(sub.extinction == 1.0);
  const FixedPointResult super = regular_tree_extinction(3, 3.0);
  CHECK(super.extinction < 1.0);
  CHECK(super.iterations < 100000);
  const double p = regular_tree_open_probability(3, 3.0);
  CHECK(super.extinction == doctest::Approx(1.0 - p + p * super.extinction * super.extinction).epsilon(1e-12));
}

TEST_CASE("truncated eta converges down to eta") {
  CHECK(regular_tree_eta_truncated(3, 2.0, 1) == doctest::Approx(regular_tree_root_open_probability(3, 2.0)));
  double previous = 1.0;
  for (int radius = 1; radius <= 60; ++radius) {
    const double v = regular_tree_eta_truncated(3, 3.0, radius);
    CHECK(v <= previous + 1e-15);
    previous = v;
  }
  CHECK(previous == doctest::Approx(regular_tree_eta(3, 3.0)).epsilon(1e-6));
}
