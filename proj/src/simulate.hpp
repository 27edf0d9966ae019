#pragma once

#include <cstddef>
#include <cstdint>

#include "core.hpp"
#include "rng.hpp"

namespace gcmp {

struct SimConfig {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Graphon graphon;
};

// n independent Uniform(0,1) draws.
NodePositions sample_positions(std::size_t n, Rng& rng);

// One Bernoulli(w(u_i, u_j)) draw per unordered dyad i < j, row by row.
Graph sample_graph(const Graphon& graphon, const NodePositions& positions, Rng& rng);

// Stream 0 draws the positions, stream 1 the edges.
struct SimulatedNetwork {
  Graph graph;
  NodePositions positions;
};
SimulatedNetwork simulate_network(const SimConfig& config);

// Pointwise (1 - gamma) w + gamma * mean(w). Preserves the graphon kind.
Graphon shrink_alternative(const Graphon& g, double gamma);

// Three communities with smooth transitions: bilinear interpolation of a
// 3 x 3 block pattern (within 0.4 / 0.5 / 0.6, between 0.1 to 0.25).
GridGraphon smooth_blockmodel_graphon();

}  // namespace gcmp
