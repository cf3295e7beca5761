#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "interlace/builders.hpp"
#include "interlace/graph_io.hpp"
#include "interlace/walk.hpp"
#include "support.hpp"

using namespace interlace;

namespace {

void check_invariants(const WeightedGraph& g) {
  for (VertexId x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    const auto wt = g.weights(x);
    double mu = 0.0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      REQUIRE(nb[i] != x);
      REQUIRE(wt[i] > 0.0);
      REQUIRE(g.weight(nb[i], x) == wt[i]);
      mu += wt[i];
      // detailed balance
      const double forward = g.mu(x) * (wt[i] / g.mu(x));
      const double backward = g.mu(nb[i]) * (g.weight(nb[i], x) / g.mu(nb[i]));
      REQUIRE(std::abs(forward - backward) <= 1e-12 * forward);
    }
    REQUIRE(std::abs(mu - g.mu(x)) <= 1e-12 * mu);
  }
}

GraphErrc load_error(const std::string& text) {
  try {
    load_graph(text);
  } catch (const GraphError& e) {
    return e.code();
  }
  FAIL("expected a GraphError");
  return GraphErrc::InvalidArgument;
}

}  // namespace

TEST_CASE("regular tree builder") {
  const Window one = build_regular_tree(3, 1, 1.0 / 3);
  CHECK(one.size() == 4);
  CHECK(one.graph().mu(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.interior().size() == 1);

  const Window two = build_regular_tree(3, 2, 1.0 / 3);
  CHECK(two.size() == 10);
  for (VertexId b : two.boundary()) CHECK(two.continuation(b) == doctest::Approx(0.5));
  CHECK(two.boundary_kind() == BoundaryKind::GeometricReturn);
  check_invariants(two.graph());

  const Window four = build_regular_tree(4, 3, 0.25);
  CHECK(four.size() == 1 + 4 + 12 + 36);
  for (VertexId b : four.boundary()) CHECK(four.continuation(b) == doctest::Approx(1.0 / 3));

  CHECK_THROWS_AS(build_regular_tree(2, 3, 0.5), GraphError);
  CHECK_THROWS_AS(build_regular_tree(3, 0, 0.5), GraphError);
  CHECK_THROWS_AS(build_regular_tree(3, 2, 0.0), GraphError);
  CHECK_THROWS_AS(build_regular_tree(3, 2, -1.0), GraphError);
}

TEST_CASE("lattice ball builder") {
  const Window w = build_lattice_ball(3, 1);
  CHECK(w.size() == 7);
  CHECK(w.graph().mu(0) == doctest::Approx(1.0));
  for (const auto& [y, q] : transition_distribution(w.graph(), 0)) CHECK(q == doctest::Approx(1.0 / 6));
  CHECK(w.boundary_kind() == BoundaryKind::Kill);

  const Window r3 = build_lattice_ball(3, 3);
  // interior cube 5^3 plus 6 faces of 5^2
  CHECK(r3.interior().size() == 125);
  CHECK(r3.boundary().size() == 150);
  check_invariants(r3.graph());
  for (VertexId x : r3.interior()) CHECK(r3.graph().degree(x) == 6);

  CHECK_THROWS_AS(build_lattice_ball(2, 3), GraphError);
  CHECK_THROWS_AS(build_lattice_ball(3, 0), GraphError);
}

TEST_CASE("product with a line") {
  const WeightedGraph point = WeightedGraph::from_edges(1, {});
  const WeightedGraph path = build_product_with_line(point, 3);
  CHECK(path.size() == 7);
  CHECK(path.edge_count() == 6);
  for (const auto& e : path.edges()) CHECK(e.weight == 1.0);

  const Window tree = build_regular_tree(3, 2, 1.0 / 3);
  const WeightedGraph prod = build_product_with_line(tree.graph(), 2);
  check_invariants(prod);
  for (VertexId x = 0; x < tree.size(); ++x) {
    for (int j = -1; j <= 1; ++j) {
      const VertexId v = product_vertex(x, j, 2);
      CHECK(prod.mu(v) == doctest::Approx(tree.graph().mu(x) + 2.0));
      CHECK(prod.degree(v) == tree.graph().degree(x) + 2);
    }
  }

  const Window pw = build_product_window(tree, 2);
  CHECK(pw.boundary_kind() == BoundaryKind::Kill);
  CHECK(pw.is_boundary(product_vertex(0, 2, 2)));
  CHECK(pw.is_boundary(product_vertex(5, 0, 2)));
  CHECK_FALSE(pw.is_boundary(product_vertex(0, 0, 2)));
}

TEST_CASE("exponential half-line graph") {
  const Window w = build_remark33_graph(40);
  const WeightedGraph& g = w.graph();
  CHECK(g.mu(0) == doctest::Approx(2.0));
  CHECK(g.mu(4) == doctest::Approx(std::exp(3.0) + std::exp(4.0)));
  const auto n1 = g.neighbors(1);
  CHECK(std::vector<VertexId>(n1.begin(), n1.end()) == std::vector<VertexId>{0, 2});
  for (const auto& [y, q] : transition_distribution(g, 0)) CHECK(q == doctest::Approx(0.5));
  CHECK(g.weight(4, 5) / g.mu(4) == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-14));
  CHECK(w.boundary().size() == 1);
  CHECK(w.boundary()[0] == 40);
  check_invariants(g);
  CHECK_THROWS_AS(build_remark33_graph(4), GraphError);
}

TEST_CASE("transition distribution sums to one") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Window w = testing::random_window(rng, 30, 15, 4);
    check_invariants(w.graph());
    for (VertexId x = 0; x < w.size(); ++x) {
      double total = 0.0;
      for (const auto& [y, q] : transition_distribution(w.graph(), x)) {
        CHECK(q > 0.0);
        total += q;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("graph loader") {
  const Window w = load_graph("vertices 2\nedge 0 1 1\nboundary 1\n");
  CHECK(w.graph().mu(0) == 1.0);
  CHECK(w.graph().mu(1) == 1.0);
  CHECK(w.continuation(1) == 0.0);

  const Window c = load_graph("# comment\n\nvertices 3\nedge 0 1 0.5   # trailing\nedge 1 2 2\nboundary 2 0.25\n");
  CHECK(c.continuation(2) == 0.25);
  CHECK(c.graph().mu(1) == 2.5);

  CHECK(load_error("vertices 2\nedge 0 1 -1\n") == GraphErrc::NonpositiveWeight);
  CHECK(load_error("vertices 4\nedge 0 1 1\nedge 2 3 1\n") == GraphErrc::Disconnected);
  CHECK(load_error("vertices 2\nedge 0 1\n") == GraphErrc::MalformedLine);
  CHECK(load_error("vertices 2\nedge 0 1 x\n") == GraphErrc::MalformedLine);
  CHECK(load_error("edge 0 1 1\n") == GraphErrc::MissingHeader);
  CHECK(load_error("vertices 2\nedge 0 2 1\n") == GraphErrc::VertexOutOfRange);
  CHECK(load_error("vertices 2\nedge 0 0 1\n") == GraphErrc::SelfLoop);
  CHECK(load_error("vertices 2\nedge 0 1 1\nedge 1 0 2\n") == GraphErrc::ConflictingWeight);
  CHECK(load_error("vertices 2\nnode 0\n") == GraphErrc::UnknownDirective);
  CHECK(load_error("vertices 2\nedge 0 1 1\nboundary 1 1.5\n") == GraphErrc::InvalidBoundary);

  // a repeated edge with the same weight is merged
  const Window dup = load_graph("vertices 2\nedge 0 1 1\nedge 1 0 1\n");
  CHECK(dup.graph().edge_count() == 1);
}

TEST_CASE("graph format round trip") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Window w = testing::random_window(rng, 25, 10, 3, 0.3);
    const Window back = load_graph(format_graph(w));
    REQUIRE(back.size() == w.size());
    const auto a = w.graph().edges();
    const auto b = back.graph().edges();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].from == b[i].from);
      CHECK(a[i].to == b[i].to);
      CHECK(a[i].weight == b[i].weight);
    }
    for (VertexId x = 0; x < w.size(); ++x) CHECK(back.continuation(x) == w.continuation(x));
  }

  const auto path = std::filesystem::temp_directory_path() / "interlace_graph_io_test.txt";
  {
    std::ofstream out(path);
    out << format_graph(build_regular_tree(3, 3, 1.0 / 3));
  }
  CHECK(load_graph_file(path).size() == 22);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_graph_file("/nonexistent/graph.txt"), GraphError);
}

TEST_CASE("window validation") {
  const WeightedGraph g = WeightedGraph::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK_THROWS_AS(Window(g, {2}, {1.0}, "bad"), GraphError);
  CHECK_THROWS_AS(Window(g, {2, 2}, {0.0, 0.0}, "dup"), GraphError);
  CHECK_THROWS_AS(Window(g, {3}, {0.0}, "range"), GraphError);
  const Window w(g, {2}, {0.0}, "ok");
  CHECK(w.touches_boundary(1));
  CHECK_FALSE(w.touches_boundary(0));
  CHECK(w.continuation(0) == 1.0);
}

TEST_CASE("vertex sets") {
  const VertexSet a(10, {1, 3, 3, 5});
  CHECK(a.size() == 3);
  CHECK(a.contains(3));
  CHECK_FALSE(a.contains(4));
  const VertexSet b(10, {5, 7});
  const VertexSet u = a.united(b);
  CHECK(u.size() == 4);
  CHECK(u.contains(7));
}
