#include "microdiff.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "estep.hpp"

namespace gcmp {

namespace {

constexpr double kMinVariance = kProbClip * (1.0 - kProbClip);

void check_network(std::size_t network) {
  if (network > 1) throw UsageError("network index must be 0 or 1");
}

std::vector<EdgeScore> keep_top(std::vector<EdgeScore> v, std::size_t q) {
  auto order = [](const EdgeScore& x, const EdgeScore& y) {
    if (x.value != y.value) return x.value > y.value;
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  };
  if (v.size() > q) {
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(q), v.end(), order);
    v.resize(q);
  } else {
    std::sort(v.begin(), v.end(), order);
  }
  return v;
}

}  // namespace

FitResult separate_mstep(const Graph& graph, const NodePositions& positions, const MStepConfig& config) {
  const Observation obs{&graph, &positions};
  return select_lambda(std::span<const Observation>(&obs, 1), config);
}

double w_diff(const SplineGraphon& g1, const SplineGraphon& g2, double u, double v) {
  const double w1 = g1(u, v);
  const double w2 = g2(u, v);
  const double v1 = std::max(w1 * (1.0 - w1), kMinVariance);
  const double v2 = std::max(w2 * (1.0 - w2), kMinVariance);
  return (w1 - w2) / std::sqrt(0.5 * (v1 + v2));
}

double DiffSurface::operator()(std::size_t from, double u, double v) const {
  check_network(from);
  return w_diff(fits[from].graphon, fits[1 - from].graphon, u, v);
}

DiffSurface diff_surface(const Graph& a, const NodePositions& pa, const Graph& b,
                         const NodePositions& pb, const MStepConfig& config) {
  return DiffSurface{{separate_mstep(a, pa, config), separate_mstep(b, pb, config)}};
}

double edge_contribution(const Graph& graph, std::size_t network, std::size_t i, std::size_t j,
                         const NodePositions& positions, const DiffSurface& surface) {
  check_network(network);
  if (i == j) throw UsageError("edge_contribution needs two distinct nodes");
  if (i >= graph.size() || j >= graph.size()) throw UsageError("node index out of range");
  if (positions.size() != graph.size()) throw UsageError("positions do not match graph size");
  const std::size_t from = graph.edge(i, j) ? network : 1 - network;
  return std::max(0.0, surface(from, positions[i], positions[j]));
}

std::vector<double> node_impact(const Graph& graph, std::size_t network, const NodePositions& positions,
                                const DiffSurface& surface) {
  const std::size_t n = graph.size();
  std::vector<double> impact(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = edge_contribution(graph, network, i, j, positions, surface);
      impact[i] += c;
      impact[j] += c;
    }
  return impact;
}

TopEdges top_edges(const Graph& graph, std::size_t network, const NodePositions& positions,
                   const DiffSurface& surface, std::size_t q) {
  std::vector<EdgeScore> present, absent;
  const std::size_t n = graph.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = edge_contribution(graph, network, i, j, positions, surface);
      if (c <= 0.0) continue;
      const bool y = graph.edge(i, j);
      (y ? present : absent).push_back({i, j, y, c});
    }
  return {keep_top(std::move(present), q), keep_top(std::move(absent), q)};
}

}  // namespace gcmp
