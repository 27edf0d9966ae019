#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "core.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace gcmp;
using Catch::Matchers::WithinAbs;

TEST_CASE("spline_basis at knots and between them", "[core]") {
  CHECK(spline_basis(2, 0.0) == std::vector<double>{1.0, 0.0});
  CHECK(spline_basis(3, 0.5) == std::vector<double>{0.0, 1.0, 0.0});
  const auto b = spline_basis(3, 0.25);
  CHECK_THAT(b[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(b[1], WithinAbs(0.5, 1e-15));
  CHECK(b[2] == 0.0);
}

TEST_CASE("spline_basis puts full weight on the last basis at u = 1", "[core]") {
  for (std::size_t L = 2; L <= 10; ++L) {
    const auto b = spline_basis(L, 1.0);
    CHECK(b.back() == 1.0);
    CHECK(std::accumulate(b.begin(), b.end() - 1, 0.0) == 0.0);
  }
}

TEST_CASE("spline_basis rejects bad arguments", "[core]") {
  CHECK_THROWS_AS(spline_basis(1, 0.5), DomainError);
  CHECK_THROWS_AS(spline_basis(3, -0.01), DomainError);
  CHECK_THROWS_AS(spline_basis(3, 1.01), DomainError);
  CHECK_THROWS_AS(spline_basis(3, std::nan("")), DomainError);
}

TEST_CASE("partition of unity and hat shape for random coordinates", "[core][property]") {
  Rng rng(11);
  for (std::size_t L = 2; L <= 30; ++L)
    for (int r = 0; r < 1000; ++r) {
      const double u = rng.uniform();
      const auto b = spline_basis(L, u);
      REQUIRE(b.size() == L);
      CHECK_THAT(std::accumulate(b.begin(), b.end(), 0.0), WithinAbs(1.0, 1e-12));
      int nonzero = 0;
      for (double x : b) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        nonzero += x != 0.0;
      }
      CHECK(nonzero <= 2);
    }
}

TEST_CASE("tensor_basis is the outer product", "[core]") {
  CHECK(tensor_basis(2, 0.0, 0.0) == std::vector<double>{1, 0, 0, 0});
  for (double x : tensor_basis(2, 0.5, 0.5)) CHECK_THAT(x, WithinAbs(0.25, 1e-15));
  const auto t = tensor_basis(3, 1.0, 0.5);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == (i == 2 * 3 + 1 ? 1.0 : 0.0));

  Rng rng(3);
  for (int r = 0; r < 200; ++r) {
    const double u = rng.uniform(), v = rng.uniform();
    const auto bu = spline_basis(4, u), bv = spline_basis(4, v);
    const auto t4 = tensor_basis(4, u, v);
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t l = 0; l < 4; ++l) CHECK(t4[k * 4 + l] == bu[k] * bv[l]);
    CHECK_THAT(std::accumulate(t4.begin(), t4.end(), 0.0), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("graphon_eval examples", "[core]") {
  const Graphon c = SplineGraphon::constant(5, 0.37);
  Rng rng(5);
  for (int r = 0; r < 100; ++r) CHECK_THAT(graphon_eval(c, rng.uniform(), rng.uniform()), WithinAbs(0.37, 1e-15));

  const Graphon g = SplineGraphon(2, {0, 1, 1, 0});
  CHECK_THAT(graphon_eval(g, 0.5, 0.5), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(graphon_eval(g, 1.5, 0.5), DomainError);

  const Graphon grid = GridGraphon(2, {0.1, 0.2, 0.2, 0.9}, Interpolation::PiecewiseConstant);
  CHECK(graphon_eval(grid, 0.1, 0.2) == 0.1);
  CHECK(graphon_eval(grid, 0.1, 0.7) == 0.2);
  CHECK(graphon_eval(grid, 0.7, 0.7) == 0.9);
  CHECK(graphon_eval(grid, 1.0, 1.0) == 0.9);
}

TEST_CASE("spline evaluation equals the dot product with the tensor basis", "[core]") {
  Rng rng(17);
  for (std::size_t L : {2u, 3u, 7u}) {
    std::vector<double> theta(L * L);
    for (std::size_t k = 0; k < L; ++k)
      for (std::size_t l = k; l < L; ++l) theta[k * L + l] = theta[l * L + k] = rng.uniform();
    const SplineGraphon g(L, theta);
    for (int r = 0; r < 100; ++r) {
      const double u = rng.uniform(), v = rng.uniform();
      const auto t = tensor_basis(L, u, v);
      CHECK_THAT(g(u, v), WithinAbs(std::inner_product(t.begin(), t.end(), theta.begin(), 0.0), 1e-14));
    }
  }
}

TEST_CASE("evaluation is exactly symmetric and stays in range", "[core][property]") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t L = 2 + rng.below(12);
    std::vector<double> theta(L * L);
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 0; k < L; ++k)
      for (std::size_t l = k; l < L; ++l) {
        const double x = rng.uniform();
        theta[k * L + l] = theta[l * L + k] = x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    const Graphon g = SplineGraphon(L, theta);
    std::vector<double> grid(16);
    for (double& x : grid) x = rng.uniform();
    const Graphon gg = GridGraphon(4, [&] {
      std::vector<double> v(16);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) v[i * 4 + j] = v[j * 4 + i] = grid[i * 4 + j];
      return v;
    }(), Interpolation::Bilinear);
    for (int r = 0; r < 500; ++r) {
      const double u = rng.uniform(), v = rng.uniform();
      const double w = graphon_eval(g, u, v);
      CHECK(w == graphon_eval(g, v, u));
      CHECK(w >= lo - 1e-15);
      CHECK(w <= hi + 1e-15);
      CHECK(graphon_eval(gg, u, v) == graphon_eval(gg, v, u));
      CHECK(graphon_eval(gg, u, v) >= 0.0);
      CHECK(graphon_eval(gg, u, v) <= 1.0);
    }
  }
}

TEST_CASE("graphon_mean closed forms", "[core]") {
  CHECK_THAT(graphon_mean(SplineGraphon::constant(6, 0.42)), WithinAbs(0.42, 1e-15));
  CHECK_THAT(graphon_mean(SplineGraphon(2, {0, 1, 1, 0})), WithinAbs(0.5, 1e-15));
  CHECK_THAT(graphon_mean(GridGraphon(2, {0.1, 0.2, 0.2, 0.9}, Interpolation::PiecewiseConstant)),
             WithinAbs(0.35, 1e-15));
}

TEST_CASE("graphon_mean agrees with Monte Carlo", "[core][property]") {
  Rng rng(29);
  const std::size_t L = 6;
  std::vector<double> theta(L * L);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = k; l < L; ++l) theta[k * L + l] = theta[l * L + k] = rng.uniform();
  const std::vector<Graphon> graphons{SplineGraphon(L, theta),
                                      GridGraphon(3, {0.4, 0.1, 0.2, 0.1, 0.5, 0.25, 0.2, 0.25, 0.6},
                                                  Interpolation::PiecewiseConstant)};
  for (const Graphon& g : graphons) {
    const int N = 1'000'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double w = graphon_eval(g, rng.uniform(), rng.uniform());
      s += w;
      s2 += w * w;
    }
    const double mean = s / N;
    const double se = std::sqrt((s2 / N - mean * mean) / N);
    CHECK(std::abs(mean - graphon_mean(g)) < 3.0 * se);
  }
}

TEST_CASE("bilinear grid graphon interpolates between cell centres", "[core]") {
  const GridGraphon g(2, {0.2, 0.4, 0.4, 0.8}, Interpolation::Bilinear);
  CHECK_THAT(g(0.25, 0.25), WithinAbs(0.2, 1e-15));
  CHECK_THAT(g(0.75, 0.75), WithinAbs(0.8, 1e-15));
  CHECK_THAT(g(0.5, 0.25), WithinAbs(0.3, 1e-15));
  CHECK_THAT(g(0.0, 0.0), WithinAbs(0.2, 1e-15));
  CHECK_THAT(g(1.0, 1.0), WithinAbs(0.8, 1e-15));
}

TEST_CASE("SplineGraphon validates box and symmetry", "[core]") {
  CHECK_THROWS_AS(SplineGraphon(2, {0, 0.5, 0.4, 0}), DomainError);
  CHECK_THROWS_AS(SplineGraphon(2, {0, 1.5, 1.5, 0}), DomainError);
  CHECK_THROWS_AS(SplineGraphon(2, {0, 0.5, 0.5}), UsageError);
  CHECK_THROWS(SplineGraphon(1, {0.5}));
}

TEST_CASE("fold and unfold are inverse on symmetric vectors", "[core]") {
  Rng rng(31);
  for (std::size_t L = 2; L <= 8; ++L) {
    std::vector<double> folded(folded_size(L));
    for (double& x : folded) x = rng.uniform();
    const auto full = unfold(L, folded);
    for (std::size_t k = 0; k < L; ++k)
      for (std::size_t l = 0; l < L; ++l) CHECK(full[k * L + l] == full[l * L + k]);
    CHECK(fold(L, full) == folded);
    CHECK(SplineGraphon::from_folded(L, folded).folded() == folded);
  }
  CHECK(folded_index(3, 0, 0) == 0);
  CHECK(folded_index(3, 0, 2) == 2);
  CHECK(folded_index(3, 1, 1) == 3);
  CHECK(folded_index(3, 2, 2) == 5);
}

TEST_CASE("Graph validates its invariants", "[core]") {
  CHECK_THROWS_AS(Graph(1), InputError);
  CHECK_THROWS_AS(Graph(2, {0, 1, 0, 0}), InputError);
  CHECK_THROWS_AS(Graph(2, {1, 0, 0, 0}), InputError);
  CHECK_THROWS_AS(Graph(2, {0, 2, 2, 0}), InputError);
  CHECK_THROWS_AS(Graph(2, {0, 1, 1}), UsageError);
  CHECK_THROWS_AS(Graph(2, {0, 1, 1, 0}, std::vector<std::string>{"a", "a"}), InputError);
  CHECK_THROWS_AS(Graph(2, {0, 1, 1, 0}, std::vector<std::string>{"a"}), UsageError);

  Graph g(3, {0, 1, 1, 1, 0, 0, 1, 0, 0}, std::vector<std::string>{"x", "y", "z"});
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(0) == 2);
  CHECK_THAT(g.density(), WithinAbs(2.0 / 3.0, 1e-15));
  CHECK(g.label(2) == "z");
  g.set_edge(1, 2, true);
  CHECK(g.edge(2, 1));
  CHECK(Graph(4).label(3) == "3");
}

TEST_CASE("NodePositions must lie strictly inside the unit interval", "[core]") {
  CHECK_THROWS_AS(NodePositions({0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(NodePositions({0.5, 1.0}), DomainError);
  NodePositions p({0.2, 0.7});
  CHECK_THROWS_AS(p.set(0, 1.0), DomainError);
  p.set(0, 0.3);
  CHECK(p[0] == 0.3);
}

TEST_CASE("child streams depend only on seed and stream index", "[core][rng]") {
  Rng a(99);
  a.next();
  a.next();
  const Rng b(99);
  CHECK(a.child(4).seed() == b.child(4).seed());
  CHECK(b.child(4).seed() != b.child(5).seed());
  Rng c = b.child(4), d = a.child(4);
  for (int i = 0; i < 10; ++i) CHECK(c.next() == d.next());
  Rng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform_open();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}
