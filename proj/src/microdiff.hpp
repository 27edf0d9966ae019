#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "core.hpp"
#include "mstep.hpp"

namespace gcmp {

// Penalized fit of a single network at positions taken from the joint fit,
// with its own AICc-selected penalty.
FitResult separate_mstep(const Graph& graph, const NodePositions& positions, const MStepConfig& config);

// (w1 - w2) / sqrt((w1(1-w1) + w2(1-w2)) / 2), each variance clipped below
// at eps(1 - eps).
double w_diff(const SplineGraphon& g1, const SplineGraphon& g2, double u, double v);

struct DiffSurface {
  std::array<FitResult, 2> fits;

  // Standardized difference of network `from` over the other one.
  double operator()(std::size_t from, double u, double v) const;
};

DiffSurface diff_surface(const Graph& a, const NodePositions& pa, const Graph& b,
                         const NodePositions& pb, const MStepConfig& config);

// Contribution of dyad (i, j) of network `network`: the positive part of the
// own-over-other difference for a present edge, of other-over-own for an
// absent one.
double edge_contribution(const Graph& graph, std::size_t network, std::size_t i, std::size_t j,
                         const NodePositions& positions, const DiffSurface& surface);

// Sum of edge_contribution over all dyads incident to each node.
std::vector<double> node_impact(const Graph& graph, std::size_t network, const NodePositions& positions,
                                const DiffSurface& surface);

struct EdgeScore {
  std::size_t i = 0, j = 0;
  bool present = false;
  double value = 0.0;
  bool operator==(const EdgeScore&) const = default;
};

// The q largest positive contributions among present edges and, separately,
// among absent edges; descending, ties by (i, j).
struct TopEdges {
  std::vector<EdgeScore> present;
  std::vector<EdgeScore> absent;
};
TopEdges top_edges(const Graph& graph, std::size_t network, const NodePositions& positions,
                   const DiffSurface& surface, std::size_t q = 200);

}  // namespace gcmp
