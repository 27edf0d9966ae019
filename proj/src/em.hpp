#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "estep.hpp"
#include "mstep.hpp"
#include "rng.hpp"
#include "twosample.hpp"

namespace gcmp {

enum class RestartSelection { HighestPvalue, LowestAicc };

struct EmConfig {
  std::size_t max_em_iters = 25;
  double position_tol = 0.0;  // <= 0 selects 1 / (2 min(n_a, n_b))
  std::size_t n_restarts = 10;
  RestartSelection selection = RestartSelection::HighestPvalue;
  unsigned workers = 1;

  void validate() const;
  double tolerance_for(std::size_t n_a, std::size_t n_b) const;
};

struct EmIteration {
  std::size_t iteration = 0;  // 1-based
  double aicc = 0.0;
  double loglik = 0.0;
  double lambda = 0.0;
  double df = 0.0;
  std::array<double, 2> mean_change{};  // mean |delta u| per network
  std::array<double, 2> acceptance{};
  bool operator==(const EmIteration&) const = default;
};

struct EmTrace {
  std::vector<EmIteration> iterations;
  bool converged = false;
  bool operator==(const EmTrace&) const = default;
};

struct EmResult {
  FitResult fit;  // refitted at the final positions
  std::array<NodePositions, 2> positions;
  EmTrace trace;
};

using EmProgress = std::function<void(const EmIteration&)>;

// A uniformly random permutation of {1/(n+1), ..., n/(n+1)}.
NodePositions initialize_positions(std::size_t n, Rng& rng);

// Alternates M-step (at the incoming positions) and E-step (one chain per
// network started at the current positions, then rank adjustment) until both
// mean position changes drop below the tolerance. The returned fit is a final
// M-step at the returned positions.
//
// Streams of Rng(seed): child(0).child(f) initializes a network with content
// fingerprint f and child(t).child(f) seeds its chain in iteration t. Keying
// by content rather than by slot makes identical inputs get identical
// positions and makes swapping the inputs swap the outputs.
EmResult em_fit(const Graph& a, const Graph& b, const EmConfig& em, const GibbsConfig& gibbs,
                const MStepConfig& mstep, std::uint64_t seed, const EmProgress& progress = {});

struct RestartOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<EmResult> em;
  std::optional<TestReport> test;
  std::string error;  // set when the run failed
  ErrorKind error_kind = ErrorKind::Numerical;

  bool ok() const { return em.has_value(); }
};

struct MultiStartResult {
  std::vector<RestartOutcome> runs;
  std::size_t selected = 0;

  const RestartOutcome& best() const { return runs[selected]; }
};

struct TestSetup {
  std::size_t K = 0;  // 0 selects choose_k
  TestOptions options;
};

// Restart r runs with seed child_seed(seed, r): em_fit on Rng(that).child(0)
// and the test on Rng(that).child(1). Under HighestPvalue every run is tested
// and the largest simulated p-value wins; under LowestAicc only the winner is
// tested. Ties go to the lowest restart index. Throws when every run fails.
MultiStartResult multi_start(const Graph& a, const Graph& b, const EmConfig& em,
                             const GibbsConfig& gibbs, const MStepConfig& mstep,
                             const TestSetup& test, std::uint64_t seed,
                             const std::function<void(std::size_t, const EmIteration&)>& progress = {});

// The test of one EM result, as run by multi_start.
TestReport test_alignment(const Graph& a, const Graph& b, const EmResult& em, const TestSetup& test,
                          const Rng& rng);

}  // namespace gcmp
