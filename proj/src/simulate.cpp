#include "simulate.hpp"

#include "errors.hpp"

namespace gcmp {

NodePositions sample_positions(std::size_t n, Rng& rng) {
  if (n < 2) throw DomainError("need at least 2 nodes");
  std::vector<double> u(n);
  for (auto& x : u) x = rng.uniform_open();
  return NodePositions(std::move(u));
}

Graph sample_graph(const Graphon& graphon, const NodePositions& positions, Rng& rng) {
  const std::size_t n = positions.size();
  Graph g(n);
  std::visit(
      [&](const auto& w) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(w(positions[i], positions[j]))) g.set_edge(i, j, true);
      },
      graphon);
  return g;
}

SimulatedNetwork simulate_network(const SimConfig& config) {
  const Rng root(config.seed);
  Rng pos_rng = root.child(0);
  Rng edge_rng = root.child(1);
  NodePositions u = sample_positions(config.n, pos_rng);
  Graph g = sample_graph(config.graphon, u, edge_rng);
  return {std::move(g), std::move(u)};
}

Graphon shrink_alternative(const Graphon& g, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  const double mean = graphon_mean(g);
  auto mix = [&](std::vector<double> v) {
    for (auto& x : v) x = (1.0 - gamma) * x + gamma * mean;
    return v;
  };
  if (const auto* s = std::get_if<SplineGraphon>(&g))
    return SplineGraphon(s->basis_size(), mix(s->theta()));
  const auto& grid = std::get<GridGraphon>(g);
  return GridGraphon(grid.resolution(), mix(grid.values()), grid.mode());
}

GridGraphon smooth_blockmodel_graphon() {
  return GridGraphon(3,
                     {0.40, 0.10, 0.20,
                      0.10, 0.50, 0.25,
                      0.20, 0.25, 0.60},
                     Interpolation::Bilinear);
}

}  // namespace gcmp
