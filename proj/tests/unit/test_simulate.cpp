#include <catch_amalgamated.hpp>

#include <cmath>

#include "errors.hpp"
#include "simulate.hpp"

using namespace gcmp;
using Catch::Matchers::WithinAbs;

TEST_CASE("sample_positions is reproducible and strictly inside (0, 1)", "[simulate]") {
  Rng a(42), b(42);
  CHECK(sample_positions(500, a) == sample_positions(500, b));
  Rng c(7);
  const NodePositions u = sample_positions(100000, c);
  double s = 0.0;
  for (double x : u.values()) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    s += x;
  }
  CHECK_THAT(s / u.size(), WithinAbs(0.5, 0.005));
  Rng d(1);
  CHECK_THROWS_AS(sample_positions(1, d), DomainError);
}

TEST_CASE("sample_graph under degenerate and constant graphons", "[simulate]") {
  Rng rng(3);
  const NodePositions u = sample_positions(200, rng);
  const Graph full = sample_graph(SplineGraphon::constant(4, 1.0), u, rng);
  CHECK(full.edge_count() == 200 * 199 / 2);
  const Graph empty = sample_graph(SplineGraphon::constant(4, 0.0), u, rng);
  CHECK(empty.edge_count() == 0);

  const Graph g = sample_graph(SplineGraphon::constant(4, 0.3), u, rng);
  const double trials = 200.0 * 199.0 / 2.0;
  const double sd = std::sqrt(0.3 * 0.7 / trials);
  CHECK(std::abs(g.density() - 0.3) < 3.0 * sd);
}

TEST_CASE("simulate_network is deterministic and yields valid graphs", "[simulate][property]") {
  Rng meta(123);
  for (int r = 0; r < 100; ++r) {
    SimConfig cfg;
    cfg.n = 2 + meta.below(60);
    cfg.seed = meta.next();
    std::vector<double> grid(9);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) grid[i * 3 + j] = grid[j * 3 + i] = meta.uniform();
    cfg.graphon = GridGraphon(3, grid, r % 2 ? Interpolation::Bilinear : Interpolation::PiecewiseConstant);
    const SimulatedNetwork net = simulate_network(cfg);
    REQUIRE(net.graph.size() == cfg.n);
    REQUIRE(net.positions.size() == cfg.n);
    // Round-tripping the adjacency through the validating constructor
    // re-checks symmetry, zero diagonal and binary entries.
    CHECK_NOTHROW(Graph(cfg.n, net.graph.adjacency()));
    CHECK(simulate_network(cfg).graph == net.graph);
  }
}

TEST_CASE("empirical dyad frequencies match the graphon", "[simulate][property]") {
  const Graphon w = smooth_blockmodel_graphon();
  const NodePositions u({0.05, 0.3, 0.5, 0.72, 0.95});
  const int reps = 10000;
  std::vector<int> hits(25, 0);
  Rng rng(77);
  for (int r = 0; r < reps; ++r) {
    const Graph g = sample_graph(w, u, rng);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) hits[i * 5 + j] += g.edge(i, j);
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double p = graphon_eval(w, u[i], u[j]);
      const double se = std::sqrt(p * (1 - p) / reps);
      // 10 dyads checked at once, so 4 SE keeps the family-wise false alarm rate small.
      CHECK(std::abs(hits[i * 5 + j] / double(reps) - p) < 4.0 * se);
    }
}

TEST_CASE("shrink_alternative examples", "[simulate]") {
  const Graphon truth = smooth_blockmodel_graphon();
  const Graphon same = shrink_alternative(truth, 0.0);
  CHECK(std::get<GridGraphon>(same) == std::get<GridGraphon>(truth));

  const Graphon flat = shrink_alternative(truth, 1.0);
  const double mean = graphon_mean(truth);
  for (double u : {0.0, 0.2, 0.6, 1.0})
    for (double v : {0.1, 0.5, 0.9}) CHECK_THAT(graphon_eval(flat, u, v), WithinAbs(mean, 1e-15));

  // A point at 0.8 on a graphon whose mean is 0.2 moves to 0.5 at gamma 0.5.
  const Graphon g = GridGraphon(2, {0.8, 0.0, 0.0, 0.0}, Interpolation::PiecewiseConstant);
  REQUIRE_THAT(graphon_mean(g), WithinAbs(0.2, 1e-15));
  CHECK_THAT(graphon_eval(shrink_alternative(g, 0.5), 0.1, 0.1), WithinAbs(0.5, 1e-15));

  CHECK_THROWS_AS(shrink_alternative(truth, -0.1), DomainError);
  CHECK_THROWS_AS(shrink_alternative(truth, 1.1), DomainError);
}

TEST_CASE("shrink_alternative preserves the global mean", "[simulate][property]") {
  Rng rng(9);
  std::vector<double> theta(25);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t l = k; l < 5; ++l) theta[k * 5 + l] = theta[l * 5 + k] = rng.uniform();
  const std::vector<Graphon> graphons{smooth_blockmodel_graphon(), SplineGraphon(5, theta)};
  for (const Graphon& g : graphons)
    for (int i = 0; i <= 20; ++i) {
      const double gamma = i / 20.0;
      CHECK_THAT(graphon_mean(shrink_alternative(g, gamma)), WithinAbs(graphon_mean(g), 1e-12));
    }
}
