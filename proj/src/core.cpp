#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "errors.hpp"

namespace gcmp {

namespace {

constexpr double kBoxSlack = 1e-9;

void check_unit(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t n) : n_(n), adj_(n * n, 0) {
  if (n < 2) throw InputError("a graph needs at least 2 nodes");
}

Graph::Graph(std::size_t n, std::vector<std::uint8_t> adj,
             std::optional<std::vector<std::string>> labels)
    : n_(n), adj_(std::move(adj)), labels_(std::move(labels)) {
  if (n < 2) throw InputError("a graph needs at least 2 nodes");
  if (adj_.size() != n * n) throw UsageError("adjacency size does not match node count");
  for (std::size_t i = 0; i < n; ++i) {
    if (adj_[i * n + i] != 0) throw InputError("self-loop at node " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = adj_[i * n + j];
      if (a > 1) throw InputError("adjacency entries must be 0 or 1");
      if (a != adj_[j * n + i]) throw InputError("adjacency matrix is not symmetric");
    }
  }
  if (labels_) {
    if (labels_->size() != n) throw UsageError("label count does not match node count");
    std::set<std::string> seen(labels_->begin(), labels_->end());
    if (seen.size() != n) throw InputError("node labels must be unique");
  }
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw UsageError("self-loops are not allowed");
  adj_[i * n_ + j] = adj_[j * n_ + i] = present ? 1 : 0;
}

std::size_t Graph::degree(std::size_t i) const {
  const auto r = row(i);
  return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

std::size_t Graph::edge_count() const {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1})) / 2;
}

double Graph::density() const {
  return static_cast<double>(edge_count()) / (0.5 * static_cast<double>(n_ * (n_ - 1)));
}

std::string Graph::label(std::size_t i) const {
  return labels_ ? (*labels_)[i] : std::to_string(i);
}

// ---------------------------------------------------------------------------
// NodePositions

NodePositions::NodePositions(std::vector<double> u) : u_(std::move(u)) {
  for (double x : u_)
    if (!(x > 0.0 && x < 1.0)) throw DomainError("node positions must lie in (0, 1)");
}

void NodePositions::set(std::size_t i, double value) {
  if (!(value > 0.0 && value < 1.0)) throw DomainError("node positions must lie in (0, 1)");
  u_[i] = value;
}

// ---------------------------------------------------------------------------
// Basis

HatPair hat_pair(std::size_t L, double u) {
  if (L < 2) throw DomainError("spline basis needs L >= 2");
  check_unit(u, "spline coordinate");
  const double scaled = u * static_cast<double>(L - 1);
  // u == 1 lands in the last interval with full weight on the last basis.
  const std::size_t idx = std::min(static_cast<std::size_t>(scaled), L - 2);
  const double t = scaled - static_cast<double>(idx);
  return {idx, 1.0 - t, t};
}

std::vector<double> spline_basis(std::size_t L, double u) {
  const HatPair h = hat_pair(L, u);
  std::vector<double> b(L, 0.0);
  b[h.index] = h.lower;
  b[h.index + 1] = h.upper;
  return b;
}

std::vector<double> tensor_basis(std::size_t L, double u, double v) {
  const auto bu = spline_basis(L, u);
  const auto bv = spline_basis(L, v);
  std::vector<double> out(L * L);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = 0; l < L; ++l) out[k * L + l] = bu[k] * bv[l];
  return out;
}

std::vector<double> fold(std::size_t L, std::span<const double> theta_full) {
  if (theta_full.size() != L * L) throw UsageError("theta must have L*L entries");
  std::vector<double> out(folded_size(L));
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = k; l < L; ++l) out[folded_index(L, k, l)] = theta_full[k * L + l];
  return out;
}

std::vector<double> unfold(std::size_t L, std::span<const double> theta_folded) {
  if (theta_folded.size() != folded_size(L)) throw UsageError("folded theta must have L(L+1)/2 entries");
  std::vector<double> out(L * L);
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = 0; l < L; ++l) out[k * L + l] = theta_folded[folded_index(L, k, l)];
  return out;
}

// ---------------------------------------------------------------------------
// SplineGraphon

SplineGraphon::SplineGraphon(std::size_t L, std::vector<double> theta)
    : L_(L), theta_(std::move(theta)) {
  if (L < 2) throw DomainError("spline graphon needs L >= 2");
  if (theta_.size() != L * L) throw UsageError("theta must have L*L entries");
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      double& t = theta_[k * L + l];
      if (!(t >= -kBoxSlack && t <= 1.0 + kBoxSlack))
        throw DomainError("spline coefficients must lie in [0, 1]");
      t = std::clamp(t, 0.0, 1.0);
      if (l < k && t != theta_[l * L + k]) throw DomainError("spline coefficients must be symmetric");
    }
  }
}

SplineGraphon SplineGraphon::constant(std::size_t L, double c) {
  return SplineGraphon(L, std::vector<double>(L * L, c));
}

SplineGraphon SplineGraphon::from_folded(std::size_t L, std::span<const double> folded) {
  return SplineGraphon(L, unfold(L, folded));
}

double SplineGraphon::operator()(double u, double v) const {
  return evaluate(hat_pair(L_, u), hat_pair(L_, v));
}

double SplineGraphon::mean() const {
  // Integral of each hat: half width at the boundary, full width inside.
  const double h = 1.0 / static_cast<double>(L_ - 1);
  std::vector<double> c(L_, h);
  c.front() = c.back() = 0.5 * h;
  double acc = 0.0;
  for (std::size_t k = 0; k < L_; ++k)
    for (std::size_t l = 0; l < L_; ++l) acc += c[k] * c[l] * theta_[k * L_ + l];
  return acc;
}

// ---------------------------------------------------------------------------
// GridGraphon

GridGraphon::GridGraphon(std::size_t m, std::vector<double> values, Interpolation mode)
    : m_(m), values_(std::move(values)), mode_(mode) {
  if (m == 0) throw DomainError("grid graphon needs a positive resolution");
  if (values_.size() != m * m) throw UsageError("grid values must have m*m entries");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double v = values_[i * m + j];
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("grid values must lie in [0, 1]");
      if (v != values_[j * m + i]) throw DomainError("grid values must be symmetric");
    }
}

double GridGraphon::operator()(double u, double v) const {
  check_unit(u, "graphon coordinate");
  check_unit(v, "graphon coordinate");
  const double m = static_cast<double>(m_);
  if (mode_ == Interpolation::PiecewiseConstant) {
    const std::size_t i = std::min(static_cast<std::size_t>(u * m), m_ - 1);
    const std::size_t j = std::min(static_cast<std::size_t>(v * m), m_ - 1);
    return values_[i * m_ + j];
  }
  if (m_ == 1) return values_[0];
  auto locate = [&](double x, std::size_t& lo, double& t) {
    const double s = std::clamp(x * m - 0.5, 0.0, m - 1.0);
    lo = std::min(static_cast<std::size_t>(s), m_ - 2);
    t = s - static_cast<double>(lo);
  };
  std::size_t i, j;
  double tu, tv;
  locate(u, i, tu);
  locate(v, j, tv);
  const double* r0 = values_.data() + i * m_ + j;
  const double* r1 = r0 + m_;
  return ((1 - tu) * (1 - tv)) * r0[0] + (((1 - tu) * tv) * r0[1] + (tu * (1 - tv)) * r1[0]) +
         (tu * tv) * r1[1];
}

double GridGraphon::mean() const {
  // In both modes every grid value integrates with weight 1/m per axis.
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double graphon_eval(const Graphon& g, double u, double v) {
  return std::visit([&](const auto& w) { return w(u, v); }, g);
}

double graphon_mean(const Graphon& g) {
  return std::visit([](const auto& w) { return w.mean(); }, g);
}

}  // namespace gcmp
