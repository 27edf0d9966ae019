#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace gcmp {

// Boundaries a_0 = 0 < a_1 < ... < a_K = 1 with a_k = k / K. Interval k
// (zero-based) is [a_k, a_{k+1}); the last one is closed on the right.
class RectanglePartition {
 public:
  explicit RectanglePartition(std::size_t K);

  std::size_t cells_per_axis() const { return K_; }
  std::size_t cell_count() const { return K_ * (K_ + 1) / 2; }
  const std::vector<double>& boundaries() const { return boundaries_; }
  std::size_t interval(double u) const;

 private:
  std::size_t K_;
  std::vector<double> boundaries_;
};

// Largest K with floor((min(n1, n2) + 1) / K) >= min_nodes_per_interval, at least 1.
std::size_t choose_k(std::size_t n1, std::size_t n2, std::size_t min_nodes_per_interval = 10);

// Present (d) and potential (m) dyad counts of one network per cell (k <= l),
// stored in row-major upper-triangular order.
struct NetworkCounts {
  std::size_t K = 0;
  std::vector<std::int64_t> d;
  std::vector<std::int64_t> m;
};

NetworkCounts rectangle_counts(const Graph& graph, std::span<const double> positions,
                               const RectanglePartition& partition);

struct CellCounts {
  std::size_t k = 0, l = 0;
  std::int64_t d1 = 0, d2 = 0, m1 = 0, m2 = 0;
  std::int64_t d() const { return d1 + d2; }
  std::int64_t m() const { return m1 + m2; }
  bool operator==(const CellCounts&) const = default;
};

struct RectangleCounts {
  std::size_t K = 0;
  std::vector<CellCounts> cells;
};

RectangleCounts pool_counts(const NetworkCounts& a, const NetworkCounts& b);

struct CellTerm {
  CellCounts counts;
  double E1 = 0.0;
  double V1 = 0.0;
  double contribution = 0.0;
  bool used = false;  // V1 > 0
  bool operator==(const CellTerm&) const = default;
};

struct Statistic {
  double t = 0.0;
  std::size_t cells_used = 0;
  std::vector<CellTerm> terms;
};

// Sum over cells with V1 > 0 of (d1 - E1)^2 / V1. Throws DegenerateTestError
// when no cell has positive variance.
Statistic test_statistic(const RectangleCounts& counts);

// Sorted statistics from n_sims replicates. Replicate r redraws every usable
// cell's d1 from its conditional hypergeometric law using rng.child(r).
std::vector<double> simulate_null(const RectangleCounts& counts, std::size_t n_sims, const Rng& rng,
                                  unsigned workers = 1);

struct TestReport {
  std::size_t K = 0;
  double t = 0.0;
  std::size_t df = 0;  // K(K+1)/2
  std::size_t cells_used = 0;
  std::vector<CellTerm> contributions;
  double p_asymptotic = 1.0;  // chi-squared with cells_used degrees of freedom
  double p_simulated = 1.0;   // (1 + #{T_sim >= t}) / (n_sims + 1)
  double crit_asymptotic = 0.0;
  double crit_simulated = 0.0;
  double alpha = 0.05;
  std::size_t n_sims = 0;
  bool reject_asymptotic = false;
  bool reject_simulated = false;

  bool operator==(const TestReport&) const = default;
};

struct TestOptions {
  double alpha = 0.05;
  std::size_t n_sims = 10000;
  unsigned workers = 1;
};

TestReport run_test(const Graph& g1, std::span<const double> u1, const Graph& g2,
                    std::span<const double> u2, const RectanglePartition& partition,
                    const TestOptions& options, const Rng& rng);

}  // namespace gcmp
