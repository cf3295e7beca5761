#include <doctest.h>

#include <cmath>

#include "interlace/builders.hpp"
#include "interlace/potential.hpp"
#include "support.hpp"

using namespace interlace;

TEST_CASE("escape from the root of regular trees") {
  const Window w = build_regular_tree(3, 6, 1.0 / 3);
  const VertexSet root(w.size(), {0});
  const HarmonicSolution h = escape_probability(w, root);
  CHECK(h.values[0] == 0.0);
  for (VertexId child : {1u, 2u, 3u}) CHECK(h.values[child] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(restarted_escape(w, h, 0) == doctest::Approx(0.5).epsilon(1e-12));

  const EquilibriumMeasure eq = equilibrium_measure(w, root);
  CHECK(eq.total == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eq.mass[0] == eq.total);
  CHECK(eq.mass[1] == 0.0);

  const Window w4 = build_regular_tree(4, 5, 0.25);
  CHECK(capacity(w4, VertexSet(w4.size(), {0})) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("adjacent pair on the 3-regular tree") {
  const Window w = build_regular_tree(3, 7, 1.0 / 3);
  const VertexSet pair(w.size(), {0, 1});
  const EquilibriumMeasure eq = equilibrium_measure(w, pair);
  CHECK(eq.mass[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(eq.mass[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(capacity(w, pair) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(capacity_variational(w, pair) == doctest::Approx(2.0 / 3).epsilon(1e-9));
}

TEST_CASE("whole interior as K") {
  const Window w = build_lattice_ball(3, 3);
  const VertexSet k = w.interior_set();
  const HarmonicSolution h = escape_probability(w, k);
  for (VertexId x : w.interior()) CHECK(h.values[x] == 0.0);

  double cut = 0.0;
  for (const Edge& e : w.graph().edges()) {
    if (w.is_boundary(e.from) != w.is_boundary(e.to)) cut += e.weight;
  }
  CHECK(capacity_variational(w, k) == doctest::Approx(cut).epsilon(1e-9));
  CHECK(capacity(w, k) == doctest::Approx(cut).epsilon(1e-9));
}

TEST_CASE("kill bias shrinks as the lattice ball grows") {
  double previous = 1e9;
  for (int radius : {3, 6, 12}) {
    const Window w = build_lattice_ball(3, radius);
    const VertexSet origin(w.size(), {0});
    const HarmonicSolution h = escape_probability(w, origin);
    const double escape = restarted_escape(w, h, 0);
    CHECK(escape < previous);
    previous = escape;
  }
  // Z^3 escape probability 1 - 0.3405...
  CHECK(previous > 0.6595);
}

TEST_CASE("capacity monotonicity, subadditivity, and agreement with the variational form") {
  Rng rng(21);
  for (int rep = 0; rep < 25; ++rep) {
    const double p = rep % 2 == 0 ? 0.0 : 0.4;
    const Window w = testing::random_window(rng, 40, 20, 6, p);
    auto a = testing::random_subset(rng, w, 5);
    auto b = a;
    for (VertexId extra : testing::random_subset(rng, w, 4)) b.push_back(extra);
    const VertexSet ka(w.size(), a);
    const VertexSet kb(w.size(), b);
    const double ca = capacity(w, ka);
    const double cb = capacity(w, kb);
    CHECK(ca <= cb * (1.0 + 1e-12));
    CHECK(capacity_variational(w, ka) == doctest::Approx(ca).epsilon(1e-9));
    CHECK(capacity_variational(w, kb) == doctest::Approx(cb).epsilon(1e-9));

    const VertexSet kc(w.size(), testing::random_subset(rng, w, 5));
    CHECK(capacity(w, ka.united(kc)) <= (ca + capacity(w, kc)) * (1.0 + 1e-12));

    const EquilibriumMeasure eq = equilibrium_measure(w, kb);
    double sum = 0.0;
    for (VertexId x = 0; x < w.size(); ++x) {
      CHECK(eq.mass[x] >= 0.0);
      if (!kb.contains(x)) CHECK(eq.mass[x] == 0.0);
      sum += eq.mass[x];
    }
    CHECK(sum == doctest::Approx(eq.total).epsilon(1e-10));
  }
}

TEST_CASE("harmonic closure at free vertices") {
  Rng rng(8);
  const Window w = testing::random_window(rng, 50, 30, 8, 0.25);
  const VertexSet k(w.size(), testing::random_subset(rng, w, 4));
  const HarmonicSolution h = escape_probability(w, k);
  const WeightedGraph& g = w.graph();
  for (VertexId x = 0; x < w.size(); ++x) {
    if (k.contains(x)) continue;
    const double c = w.continuation(x);
    double next = 0.0;
    for (std::size_t i = 0; i < g.degree(x); ++i) next += g.weights(x)[i] / g.mu(x) * h.values[g.neighbors(x)[i]];
    CHECK(h.values[x] == doctest::Approx((1.0 - c) + c * next).epsilon(1e-10));
    CHECK(h.values[x] >= -1e-12);
    CHECK(h.values[x] <= 1.0 + 1e-12);
  }
}

TEST_CASE("conjugate gradients agree with the direct solve") {
  const Window w = build_lattice_ball(3, 6);
  const auto nb = w.graph().neighbors(0);
  const VertexSet k(w.size(), {0, nb[0], nb[1]});
  SolverOptions cg;
  cg.direct_limit = 0;
  CHECK(capacity(w, k, cg) == doctest::Approx(capacity(w, k)).epsilon(1e-9));
  CHECK(capacity_variational(w, k, cg) == doctest::Approx(capacity(w, k)).epsilon(1e-9));
}

TEST_CASE("potential errors") {
  const Window w = build_regular_tree(3, 3, 1.0 / 3);
  try {
    capacity(w, VertexSet(w.size(), std::vector<VertexId>{}));
    FAIL("expected EmptySet");
  } catch (const PotentialError& e) {
    CHECK(e.code() == PotentialErrc::EmptySet);
  }
  try {
    capacity(w, VertexSet(3, {0}));
    FAIL("expected InvalidSet");
  } catch (const PotentialError& e) {
    CHECK(e.code() == PotentialErrc::InvalidSet);
  }
  CHECK_THROWS_AS(capacity_variational(w, VertexSet(w.size(), {w.boundary()[0]})), PotentialError);
}

TEST_CASE("monte carlo escape matches the linear solve") {
  const Window tree = build_regular_tree(3, 8, 1.0 / 3);
  const McEstimate root = escape_probability_mc(tree, VertexSet(tree.size(), {0}), 0, 100000, 3);
  CHECK(testing::within_se(root.estimate, 0.5, root.stderr_));

  const McEstimate blocked = escape_probability_mc(tree, VertexSet(tree.size(), {0, 1, 2, 3}), 0, 1000, 3);
  CHECK(blocked.estimate == 0.0);

  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const Window w = testing::random_window(rng, 30, 10, 4, rep % 3 == 0 ? 0.3 : 0.0);
    const VertexSet k(w.size(), testing::random_subset(rng, w, 4));
    const VertexId x = k.members()[static_cast<std::size_t>(rng.uniform() * k.size())];
    const double exact = restarted_escape(w, escape_probability(w, k), x);
    const McEstimate mc = escape_probability_mc(w, k, x, 20000, 1000 + rep, rep % 2 + 1);
    CHECK(testing::within_se(mc.estimate, exact, std::max(mc.stderr_, 1e-9)));
  }
}

TEST_CASE("dirichlet bound") {
  CHECK(capacity_lower_bound(2.0, 1.0) == 0.5);
  CHECK(capacity_lower_bound(3.0, 0.0) == 0.0);
  CHECK_THROWS(capacity_lower_bound(0.0, 1.0));

  const Window w = build_regular_tree(3, 8, 1.0 / 3);
  const DirichletCalibration cal = calibrate_dirichlet_constant(w, 200, 17);
  CHECK(cal.functions == 200);
  CHECK(cal.kappa_bar > 0.0);

  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const VertexSet a(w.size(), testing::random_subset(rng, w, 12));
    double mu = 0.0;
    for (VertexId x : a.members()) mu += w.graph().mu(x);
    CHECK(capacity_lower_bound(cal.kappa_bar, mu) <= capacity(w, a));
  }
  // balls around the root are the hardest sets for the bound
  for (int r = 0; r <= 6; ++r) {
    const auto dist = bfs_distances(w.graph(), 0);
    std::vector<VertexId> ball;
    for (VertexId x = 0; x < w.size(); ++x) {
      if (dist[x] <= r) ball.push_back(x);
    }
    const VertexSet a(w.size(), ball);
    CHECK(capacity_lower_bound(cal.kappa_bar, static_cast<double>(ball.size())) <= capacity(w, a));
  }

  std::vector<double> f(w.size(), 0.0);
  f[0] = 1.0;
  CHECK(dirichlet_energy(w, f) == doctest::Approx(1.0));
  CHECK(weighted_norm_sq(w, f) == doctest::Approx(1.0));
}
