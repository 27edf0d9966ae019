#include "estep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace gcmp {

namespace {

constexpr double kLogitClamp = 35.0;
constexpr std::size_t kAdaptWindow = 10;
constexpr double kAdaptFactor = 1.1;
constexpr double kTargetAcceptance = 0.4;

double clip(double w) { return std::clamp(w, kProbClip, 1.0 - kProbClip); }

double edge_log_ratio(bool y, double w_new, double w_old) {
  w_new = clip(w_new);
  w_old = clip(w_old);
  return y ? std::log(w_new / w_old) : std::log((1.0 - w_new) / (1.0 - w_old));
}

// Evaluates w(u_i, u_j) against cached node coordinates. The spline
// specialisation keeps hat-function values per node.
struct GenericKernel {
  const Graphon& g;
  std::vector<double> u;
  double value(double ui, std::size_t j) const { return graphon_eval(g, ui, u[j]); }
  void move(std::size_t i, double ui) { u[i] = ui; }
};

struct SplineKernel {
  const SplineGraphon& g;
  std::vector<HatPair> hats;
  SplineKernel(const SplineGraphon& sg, const NodePositions& pos) : g(sg), hats(pos.size()) {
    for (std::size_t i = 0; i < pos.size(); ++i) hats[i] = hat_pair(g.basis_size(), pos[i]);
  }
};

template <typename Kernel>
double delta_logdensity(const Graph& graph, const Kernel& kernel, std::size_t i, double u_old,
                        double u_new);

template <>
double delta_logdensity(const Graph& graph, const GenericKernel& k, std::size_t i, double u_old,
                        double u_new) {
  const auto row = graph.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == i) continue;
    acc += edge_log_ratio(row[j] != 0, k.value(u_new, j), k.value(u_old, j));
  }
  return acc;
}

template <>
double delta_logdensity(const Graph& graph, const SplineKernel& k, std::size_t i, double,
                        double u_new) {
  const HatPair h_new = hat_pair(k.g.basis_size(), u_new);
  const HatPair& h_old = k.hats[i];
  const auto row = graph.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == i) continue;
    acc += edge_log_ratio(row[j] != 0, k.g.evaluate(h_new, k.hats[j]), k.g.evaluate(h_old, k.hats[j]));
  }
  return acc;
}

void kernel_move(GenericKernel& k, std::size_t i, double u) { k.move(i, u); }
void kernel_move(SplineKernel& k, std::size_t i, double u) {
  k.hats[i] = hat_pair(k.g.basis_size(), u);
}

template <typename Kernel>
ChainResult run_chain_impl(const Graph& graph, Kernel kernel, const GibbsConfig& config,
                           NodePositions u) {
  const std::size_t n = graph.size();
  Rng rng(config.seed);
  double sigma = config.sigma_v;

  ChainResult out;
  out.n = n;
  out.n_keep = config.n_keep;
  out.samples.reserve(config.n_keep * n);

  auto sweep = [&]() {
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Proposal p = propose(u[i], sigma, rng);
      const double log_alpha = delta_logdensity(graph, kernel, i, u[i], p.u_star) + p.log_proposal_ratio;
      if (std::log(rng.uniform_open()) < log_alpha) {
        u.set(i, p.u_star);
        kernel_move(kernel, i, p.u_star);
        ++accepted;
      }
    }
    return accepted;
  };

  std::size_t window_accepted = 0;
  for (std::size_t s = 1; s <= config.burn_in; ++s) {
    window_accepted += sweep();
    if (config.adapt && s % kAdaptWindow == 0) {
      const double rate = static_cast<double>(window_accepted) / static_cast<double>(kAdaptWindow * n);
      sigma = rate > kTargetAcceptance ? sigma * kAdaptFactor : sigma / kAdaptFactor;
      window_accepted = 0;
    }
  }

  std::size_t accepted = 0;
  const std::size_t total = config.n_keep * config.thinning;
  for (std::size_t s = 1; s <= total; ++s) {
    accepted += sweep();
    if (s % config.thinning == 0)
      out.samples.insert(out.samples.end(), u.values().begin(), u.values().end());
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total * n);
  out.final_sigma_v = sigma;
  return out;
}

}  // namespace

void GibbsConfig::validate() const {
  if (!(sigma_v > 0.0)) throw ConfigError("sigma_v must be positive");
  if (thinning < 1) throw ConfigError("thinning must be at least 1");
  if (n_keep < 1) throw ConfigError("n_keep must be at least 1");
}

double full_conditional_logdensity(const Graphon& graphon, const Graph& graph,
                                   const NodePositions& positions, std::size_t i, double u) {
  if (positions.size() != graph.size()) throw UsageError("positions do not match graph size");
  const auto row = graph.row(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == i) continue;
    const double w = clip(graphon_eval(graphon, u, positions[j]));
    acc += row[j] ? std::log(w) : std::log(1.0 - w);
  }
  return acc;
}

double log_proposal_ratio(double u_cur, double u_star) {
  return std::log(u_star * (1.0 - u_star)) - std::log(u_cur * (1.0 - u_cur));
}

Proposal propose(double u_cur, double sigma_v, Rng& rng) {
  const double v = std::log(u_cur / (1.0 - u_cur)) + sigma_v * rng.normal();
  const double u_star = 1.0 / (1.0 + std::exp(-std::clamp(v, -kLogitClamp, kLogitClamp)));
  return {u_star, log_proposal_ratio(u_cur, u_star)};
}

bool mh_accept(const Graphon& graphon, const Graph& graph, NodePositions& positions, std::size_t i,
               const Proposal& proposal, Rng& rng) {
  const GenericKernel kernel{graphon, positions.values()};
  const double log_alpha =
      delta_logdensity(graph, kernel, i, positions[i], proposal.u_star) + proposal.log_proposal_ratio;
  if (std::log(rng.uniform_open()) < log_alpha) {
    positions.set(i, proposal.u_star);
    return true;
  }
  return false;
}

ChainResult run_chain(const Graph& graph, const Graphon& graphon, const GibbsConfig& config,
                      const NodePositions& start) {
  config.validate();
  if (start.size() != graph.size()) throw UsageError("start positions do not match graph size");
  if (const auto* s = std::get_if<SplineGraphon>(&graphon))
    return run_chain_impl(graph, SplineKernel(*s, start), config, start);
  return run_chain_impl(graph, GenericKernel{graphon, start.values()}, config, start);
}

std::vector<double> posterior_means(const ChainResult& chain) {
  if (chain.n_keep == 0) throw UsageError("posterior mean of an empty sample");
  std::vector<double> mean(chain.n, 0.0);
  for (std::size_t s = 0; s < chain.n_keep; ++s)
    for (std::size_t i = 0; i < chain.n; ++i) mean[i] += chain.sample(s, i);
  for (auto& m : mean) m /= static_cast<double>(chain.n_keep);
  return mean;
}

NodePositions rank_adjust(const std::vector<double>& means) {
  const std::size_t n = means.size();
  if (n < 2) throw UsageError("rank adjustment needs at least 2 nodes");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r)
    out[order[r]] = static_cast<double>(r + 1) / static_cast<double>(n + 1);
  return NodePositions(std::move(out));
}

}  // namespace gcmp
