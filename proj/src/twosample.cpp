#include "twosample.hpp"

#include <algorithm>
#include <cmath>

#include "chi2.hpp"
#include "errors.hpp"
#include "hypergeom.hpp"
#include "parallel.hpp"

namespace gcmp {

namespace {

std::size_t cell_index(std::size_t K, std::size_t k, std::size_t l) { return folded_index(K, k, l); }

}  // namespace

RectanglePartition::RectanglePartition(std::size_t K) : K_(K), boundaries_(K + 1) {
  if (K < 1) throw DomainError("partition needs K >= 1");
  for (std::size_t k = 0; k <= K; ++k) boundaries_[k] = static_cast<double>(k) / static_cast<double>(K);
}

std::size_t RectanglePartition::interval(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("position must lie in [0, 1]");
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), u);
  const auto k = static_cast<std::size_t>(it - boundaries_.begin());
  return std::min(k == 0 ? 0 : k - 1, K_ - 1);
}

std::size_t choose_k(std::size_t n1, std::size_t n2, std::size_t min_nodes_per_interval) {
  if (n1 < 2 || n2 < 2) throw DomainError("choose_k needs networks with at least 2 nodes");
  if (min_nodes_per_interval < 1) throw DomainError("min_nodes_per_interval must be at least 1");
  return std::max<std::size_t>(1, (std::min(n1, n2) + 1) / min_nodes_per_interval);
}

NetworkCounts rectangle_counts(const Graph& graph, std::span<const double> positions,
                               const RectanglePartition& partition) {
  const std::size_t n = graph.size();
  if (positions.size() != n) throw UsageError("positions do not match graph size");
  const std::size_t K = partition.cells_per_axis();
  std::vector<std::size_t> interval(n);
  for (std::size_t i = 0; i < n; ++i) interval[i] = partition.interval(positions[i]);

  NetworkCounts out{K, std::vector<std::int64_t>(partition.cell_count(), 0),
                    std::vector<std::int64_t>(partition.cell_count(), 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = graph.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t c = cell_index(K, interval[i], interval[j]);
      ++out.m[c];
      out.d[c] += row[j];
    }
  }
  return out;
}

RectangleCounts pool_counts(const NetworkCounts& a, const NetworkCounts& b) {
  if (a.K != b.K) throw UsageError("counts use different partitions");
  RectangleCounts out{a.K, {}};
  out.cells.reserve(a.d.size());
  for (std::size_t k = 0; k < a.K; ++k)
    for (std::size_t l = k; l < a.K; ++l) {
      const std::size_t c = cell_index(a.K, k, l);
      out.cells.push_back({k, l, a.d[c], b.d[c], a.m[c], b.m[c]});
    }
  return out;
}

Statistic test_statistic(const RectangleCounts& counts) {
  Statistic s;
  s.terms.reserve(counts.cells.size());
  for (const CellCounts& c : counts.cells) {
    CellTerm term{c};
    const HypergeomMoments mom = hypergeom_moments(c.m(), c.d(), c.m1);
    term.E1 = mom.mean;
    term.V1 = mom.variance;
    if (mom.variance > 0.0) {
      const double dev = static_cast<double>(c.d1) - mom.mean;
      term.contribution = dev * dev / mom.variance;
      term.used = true;
      s.t += term.contribution;
      ++s.cells_used;
    }
    s.terms.push_back(term);
  }
  if (s.cells_used == 0) throw DegenerateTestError("no cell has positive conditional variance");
  return s;
}

std::vector<double> simulate_null(const RectangleCounts& counts, std::size_t n_sims, const Rng& rng,
                                  unsigned workers) {
  struct Usable {
    HypergeomSampler draw;
    double E1, V1;
  };
  std::vector<Usable> usable;
  for (const CellCounts& c : counts.cells) {
    const HypergeomMoments mom = hypergeom_moments(c.m(), c.d(), c.m1);
    if (mom.variance > 0.0) usable.push_back({HypergeomSampler(c.m(), c.d(), c.m1), mom.mean, mom.variance});
  }
  std::vector<double> sample(n_sims, 0.0);
  parallel_for(n_sims, workers, [&](std::size_t r) {
    Rng child = rng.child(r);
    double t = 0.0;
    for (const Usable& u : usable) {
      const double dev = static_cast<double>(u.draw(child)) - u.E1;
      t += dev * dev / u.V1;
    }
    sample[r] = t;
  });
  std::sort(sample.begin(), sample.end());
  return sample;
}

TestReport run_test(const Graph& g1, std::span<const double> u1, const Graph& g2,
                    std::span<const double> u2, const RectanglePartition& partition,
                    const TestOptions& options, const Rng& rng) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (options.n_sims < 1) throw ConfigError("n_sims must be at least 1");
  const RectangleCounts counts =
      pool_counts(rectangle_counts(g1, u1, partition), rectangle_counts(g2, u2, partition));
  const Statistic stat = test_statistic(counts);

  TestReport r;
  r.K = partition.cells_per_axis();
  r.t = stat.t;
  r.df = partition.cell_count();
  r.cells_used = stat.cells_used;
  r.contributions = stat.terms;
  r.alpha = options.alpha;
  r.n_sims = options.n_sims;

  const auto df = static_cast<double>(stat.cells_used);
  r.p_asymptotic = chi2_sf(stat.t, df);
  r.crit_asymptotic = chi2_quantile(1.0 - options.alpha, df);

  const std::vector<double> null = simulate_null(counts, options.n_sims, rng, options.workers);
  const auto at_least = static_cast<double>(null.end() - std::lower_bound(null.begin(), null.end(), stat.t));
  r.p_simulated = (1.0 + at_least) / (static_cast<double>(null.size()) + 1.0);
  const auto q = static_cast<std::size_t>(std::ceil((1.0 - options.alpha) * static_cast<double>(null.size())));
  r.crit_simulated = null[std::clamp<std::size_t>(q, 1, null.size()) - 1];

  r.reject_asymptotic = stat.t > r.crit_asymptotic;
  r.reject_simulated = stat.t > r.crit_simulated;
  return r;
}

}  // namespace gcmp
