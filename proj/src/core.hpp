#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gcmp {

// Undirected simple binary network stored as a dense symmetric adjacency
// matrix with zero diagonal.
class Graph {
 public:
  Graph() = default;
  // Empty graph on n >= 2 nodes.
  explicit Graph(std::size_t n);
  // Validates symmetry, binary entries and zero diagonal; adj is row-major n*n.
  Graph(std::size_t n, std::vector<std::uint8_t> adj,
        std::optional<std::vector<std::string>> labels = std::nullopt);

  std::size_t size() const { return n_; }
  bool edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  void set_edge(std::size_t i, std::size_t j, bool present);
  std::size_t degree(std::size_t i) const;
  std::size_t edge_count() const;
  double density() const;

  std::span<const std::uint8_t> row(std::size_t i) const { return {adj_.data() + i * n_, n_}; }
  const std::vector<std::uint8_t>& adjacency() const { return adj_; }
  const std::optional<std::vector<std::string>>& labels() const { return labels_; }
  // Label for node i, falling back to its zero-based index.
  std::string label(std::size_t i) const;

  bool operator==(const Graph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
  std::optional<std::vector<std::string>> labels_;
};

// Latent node coordinates, every entry strictly inside (0, 1).
class NodePositions {
 public:
  NodePositions() = default;
  explicit NodePositions(std::vector<double> u);

  std::size_t size() const { return u_.size(); }
  double operator[](std::size_t i) const { return u_[i]; }
  const std::vector<double>& values() const { return u_; }
  void set(std::size_t i, double value);

  bool operator==(const NodePositions&) const = default;

 private:
  std::vector<double> u_;
};

// The two nonzero hat-function values at a coordinate: basis `index` carries
// weight `lower`, basis `index + 1` carries `upper`.
struct HatPair {
  std::size_t index;
  double lower;
  double upper;
};

HatPair hat_pair(std::size_t L, double u);

// Linear B-spline (hat) basis on L equidistant knots 0, 1/(L-1), ..., 1.
std::vector<double> spline_basis(std::size_t L, double u);

// Row-major Kronecker product spline_basis(L,u) (x) spline_basis(L,v).
std::vector<double> tensor_basis(std::size_t L, double u, double v);

// Upper-triangular (k <= l) parameter count and index for the folded
// symmetric parameterization.
inline std::size_t folded_size(std::size_t L) { return L * (L + 1) / 2; }
inline std::size_t folded_index(std::size_t L, std::size_t k, std::size_t l) {
  if (k > l) std::swap(k, l);
  return k * L - k * (k - 1) / 2 + (l - k);
}

std::vector<double> fold(std::size_t L, std::span<const double> theta_full);
std::vector<double> unfold(std::size_t L, std::span<const double> theta_folded);

// Tensor-product linear B-spline graphon. theta has L*L entries indexed
// (k, l) row-major, kept symmetric and inside [0, 1].
class SplineGraphon {
 public:
  SplineGraphon() = default;
  SplineGraphon(std::size_t L, std::vector<double> theta);
  static SplineGraphon constant(std::size_t L, double c);
  static SplineGraphon from_folded(std::size_t L, std::span<const double> folded);

  std::size_t basis_size() const { return L_; }
  const std::vector<double>& theta() const { return theta_; }
  double coefficient(std::size_t k, std::size_t l) const { return theta_[k * L_ + l]; }
  std::vector<double> folded() const { return fold(L_, theta_); }

  double operator()(double u, double v) const;
  double evaluate(const HatPair& a, const HatPair& b) const {
    const double* r0 = theta_.data() + a.index * L_ + b.index;
    const double* r1 = r0 + L_;
    // Cross terms are added together first so that swapping (u, v) gives a
    // bit-identical result.
    return (a.lower * b.lower) * r0[0] +
           ((a.lower * b.upper) * r0[1] + (a.upper * b.lower) * r1[0]) +
           (a.upper * b.upper) * r1[1];
  }
  double mean() const;

  bool operator==(const SplineGraphon&) const = default;

 private:
  std::size_t L_ = 0;
  std::vector<double> theta_;
};

enum class Interpolation { PiecewiseConstant, Bilinear };

// Graphon tabulated on an m x m grid. Piecewise-constant mode returns the
// value of the containing cell; bilinear mode interpolates between cell
// centres (i + 1/2)/m and holds the border value beyond the outermost centres.
class GridGraphon {
 public:
  GridGraphon() = default;
  GridGraphon(std::size_t m, std::vector<double> values, Interpolation mode);

  std::size_t resolution() const { return m_; }
  const std::vector<double>& values() const { return values_; }
  Interpolation mode() const { return mode_; }

  double operator()(double u, double v) const;
  double mean() const;

  bool operator==(const GridGraphon&) const = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> values_;
  Interpolation mode_ = Interpolation::PiecewiseConstant;
};

using Graphon = std::variant<SplineGraphon, GridGraphon>;

double graphon_eval(const Graphon& g, double u, double v);
double graphon_mean(const Graphon& g);

}  // namespace gcmp
