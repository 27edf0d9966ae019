#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace gcmp {

// Probabilities are clipped to [kProbClip, 1 - kProbClip] wherever a
// log-likelihood is evaluated.
inline constexpr double kProbClip = 1e-6;

struct GibbsConfig {
  double sigma_v = 1.0;       // proposal sd on the logit scale
  std::size_t burn_in = 50;   // sweeps
  std::size_t thinning = 5;
  std::size_t n_keep = 30;
  bool adapt = true;          // tune sigma_v during burn-in
  std::uint64_t seed = 0;

  void validate() const;
};

double full_conditional_logdensity(const Graphon& graphon, const Graph& graph,
                                   const NodePositions& positions, std::size_t i, double u);

struct Proposal {
  double u_star;
  double log_proposal_ratio;  // log q(u | u*) - log q(u* | u)
};

Proposal propose(double u_cur, double sigma_v, Rng& rng);

// Log of the logit-normal proposal ratio u*(1-u*) / (u(1-u)).
double log_proposal_ratio(double u_cur, double u_star);

// Metropolis-Hastings accept/reject for node i; updates positions on accept.
bool mh_accept(const Graphon& graphon, const Graph& graph, NodePositions& positions, std::size_t i,
               const Proposal& proposal, Rng& rng);

struct ChainResult {
  // n_keep rows of n positions, row-major.
  std::vector<double> samples;
  std::size_t n_keep = 0;
  std::size_t n = 0;
  double acceptance_rate = 0.0;  // after burn-in
  double final_sigma_v = 0.0;

  double sample(std::size_t s, std::size_t i) const { return samples[s * n + i]; }
};

// burn_in + n_keep * thinning sweeps, each updating nodes 0..n-1 in order.
// With adapt set, sigma_v is multiplied or divided by 1.1 every 10 burn-in
// sweeps towards 40% acceptance and frozen afterwards.
ChainResult run_chain(const Graph& graph, const Graphon& graphon, const GibbsConfig& config,
                      const NodePositions& start);

std::vector<double> posterior_means(const ChainResult& chain);

// r / (n + 1) by ascending value; ties resolved by node index.
NodePositions rank_adjust(const std::vector<double>& means);

}  // namespace gcmp
