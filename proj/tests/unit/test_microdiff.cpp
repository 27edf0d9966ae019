#include <catch_amalgamated.hpp>

#include <cmath>

#include "errors.hpp"
#include "microdiff.hpp"
#include "simulate.hpp"

using namespace gcmp;
using Catch::Matchers::WithinAbs;

namespace {

DiffSurface surface_of(const SplineGraphon& a, const SplineGraphon& b) {
  DiffSurface s;
  s.fits[0].graphon = a;
  s.fits[1].graphon = b;
  return s;
}

SplineGraphon random_spline(Rng& rng, std::size_t L) {
  std::vector<double> t(L * L);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = k; l < L; ++l) t[k * L + l] = t[l * L + k] = rng.uniform();
  return SplineGraphon(L, t);
}

}  // namespace

TEST_CASE("w_diff examples", "[microdiff]") {
  const auto hi = SplineGraphon::constant(3, 0.8), lo = SplineGraphon::constant(3, 0.2);
  CHECK_THAT(w_diff(hi, lo, 0.3, 0.7), WithinAbs(1.5, 1e-12));
  CHECK_THAT(w_diff(lo, hi, 0.3, 0.7), WithinAbs(-1.5, 1e-12));
  CHECK(w_diff(hi, hi, 0.1, 0.9) == 0.0);
  // Both fits at the boundary: the clipped variance keeps the ratio finite.
  const auto zero = SplineGraphon::constant(2, 0.0), one = SplineGraphon::constant(2, 1.0);
  CHECK(std::isfinite(w_diff(one, zero, 0.5, 0.5)));
  CHECK(w_diff(one, zero, 0.5, 0.5) > 0.0);
}

TEST_CASE("w_diff is antisymmetric", "[microdiff][property]") {
  Rng rng(3);
  const auto a = random_spline(rng, 5), b = random_spline(rng, 7);
  for (int r = 0; r < 1000; ++r) {
    const double u = rng.uniform(), v = rng.uniform();
    CHECK_THAT(w_diff(a, b, u, v) + w_diff(b, a, u, v), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("edge contributions follow the positive-part rule", "[microdiff]") {
  Graph g(3);
  g.set_edge(0, 1, true);
  const NodePositions u({0.2, 0.5, 0.8});
  const auto hi = SplineGraphon::constant(3, 0.8), lo = SplineGraphon::constant(3, 0.2);

  const DiffSurface a_higher = surface_of(hi, lo);
  CHECK_THAT(edge_contribution(g, 0, 0, 1, u, a_higher), WithinAbs(1.5, 1e-12));
  CHECK(edge_contribution(g, 0, 0, 2, u, a_higher) == 0.0);
  CHECK(edge_contribution(g, 1, 0, 1, u, a_higher) == 0.0);
  CHECK_THAT(edge_contribution(g, 1, 1, 2, u, a_higher), WithinAbs(1.5, 1e-12));

  const DiffSurface same = surface_of(hi, hi);
  for (std::size_t net : {0u, 1u})
    for (double x : node_impact(g, net, u, same)) CHECK(x == 0.0);

  CHECK_THROWS_AS(edge_contribution(g, 0, 1, 1, u, a_higher), UsageError);
  CHECK_THROWS_AS(edge_contribution(g, 0, 0, 3, u, a_higher), UsageError);
  CHECK_THROWS_AS(edge_contribution(g, 2, 0, 1, u, a_higher), UsageError);
}

TEST_CASE("node impact on a 3-node instance matches a hand sum", "[microdiff]") {
  Graph g(3);
  g.set_edge(0, 1, true);
  g.set_edge(1, 2, true);
  const NodePositions u({0.1, 0.45, 0.9});
  const SplineGraphon a(2, {0.7, 0.2, 0.2, 0.4});
  const SplineGraphon b(2, {0.3, 0.5, 0.5, 0.6});
  const DiffSurface s = surface_of(a, b);
  auto pos = [](double x) { return std::max(0.0, x); };
  const double c01 = pos(w_diff(a, b, 0.1, 0.45));  // present
  const double c12 = pos(w_diff(a, b, 0.45, 0.9));  // present
  const double c02 = pos(w_diff(b, a, 0.1, 0.9));   // absent
  const auto impact = node_impact(g, 0, u, s);
  CHECK_THAT(impact[0], WithinAbs(c01 + c02, 1e-12));
  CHECK_THAT(impact[1], WithinAbs(c01 + c12, 1e-12));
  CHECK_THAT(impact[2], WithinAbs(c12 + c02, 1e-12));

  const TopEdges top = top_edges(g, 0, u, s, 1);
  CHECK(top.present.size() <= 1);
  if (!top.present.empty()) CHECK(top.present[0].value == std::max(c01, c12));
}

TEST_CASE("contributions and impacts are nonnegative", "[microdiff][property]") {
  Rng rng(11);
  const auto net = simulate_network({40, 5, smooth_blockmodel_graphon()});
  const DiffSurface s = surface_of(random_spline(rng, 4), random_spline(rng, 4));
  for (std::size_t network : {0u, 1u}) {
    for (double x : node_impact(net.graph, network, net.positions, s)) CHECK(x >= 0.0);
    const TopEdges top = top_edges(net.graph, network, net.positions, s, 15);
    CHECK(top.present.size() <= 15);
    CHECK(top.absent.size() <= 15);
    for (const auto* list : {&top.present, &top.absent})
      for (std::size_t k = 0; k < list->size(); ++k) {
        const EdgeScore& e = (*list)[k];
        CHECK(e.value > 0.0);
        CHECK(e.present == net.graph.edge(e.i, e.j));
        CHECK(e.value == edge_contribution(net.graph, network, e.i, e.j, net.positions, s));
        if (k > 0) CHECK((*list)[k - 1].value >= e.value);
      }
  }
}

TEST_CASE("separate fits", "[microdiff]") {
  const auto net = simulate_network({120, 8, SplineGraphon::constant(2, 0.25)});
  const MStepConfig cfg = default_mstep_config(120);
  const FitResult f1 = separate_mstep(net.graph, net.positions, cfg);
  const FitResult f2 = separate_mstep(net.graph, net.positions, cfg);
  CHECK(f1.graphon == f2.graphon);
  CHECK(f1.lambda == f2.lambda);
  const double density = net.graph.density();
  const double se = std::sqrt(density * (1 - density) / (120.0 * 119.0 / 2));
  double mean = 0.0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) mean += f1.graphon(i / 10.0, j / 10.0) / 121.0;
  CHECK(std::abs(mean - density) < 0.03);

  // A very heavy penalty flattens the fit to the pooled density.
  MStepConfig heavy = cfg;
  heavy.lambda_grid = {1e8};
  const FitResult flat = separate_mstep(net.graph, net.positions, heavy);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) CHECK(std::abs(flat.graphon(i / 10.0, j / 10.0) - density) < 2 * se + 1e-3);
  for (double x : f1.graphon.theta()) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("identical graphs with shared positions give zero contributions", "[microdiff]") {
  const auto net = simulate_network({60, 13, smooth_blockmodel_graphon()});
  const DiffSurface s = diff_surface(net.graph, net.positions, net.graph, net.positions, default_mstep_config(60));
  CHECK(s.fits[0].graphon == s.fits[1].graphon);
  for (std::size_t network : {0u, 1u}) {
    for (double x : node_impact(net.graph, network, net.positions, s)) CHECK(x == 0.0);
    const TopEdges top = top_edges(net.graph, network, net.positions, s);
    CHECK(top.present.empty());
    CHECK(top.absent.empty());
  }
}
