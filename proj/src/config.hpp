#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "em.hpp"
#include "estep.hpp"
#include "io.hpp"
#include "mstep.hpp"
#include "parallel.hpp"

namespace gcmp {

// Every tunable of a run. Serialized as one flat JSON object; applying a
// partial object overrides only the keys it contains, which gives the
// precedence flags > config file > defaults when applied in that order.
struct RunConfig {
  // inputs and outputs
  std::string net_a;
  std::string net_b;
  std::string format = "edges";
  std::optional<double> threshold;
  std::string out_dir = ".";

  // test
  std::size_t k = 0;  // 0 = choose from the network sizes
  std::size_t min_nodes_per_interval = 10;
  double alpha = 0.05;
  std::size_t n_sims = 10000;

  // restarts and EM
  std::size_t restarts = 10;
  std::string select = "pvalue";
  std::size_t max_em_iters = 25;
  double position_tol = 0.0;  // 0 = 1 / (2 min n)

  // Gibbs sampler
  double sigma_v = 1.0;
  std::size_t burn_in = 50;
  std::size_t thinning = 5;
  std::size_t n_keep = 30;
  bool adapt = true;

  // M-step
  std::size_t basis_size = 0;  // 0 = clamp(floor(sqrt(min n)), 8, 25)
  double lambda_min = 1e-2;
  double lambda_max = 1e6;
  std::size_t lambda_count = 25;
  std::size_t max_scoring_iters = 100;
  double scoring_tol = 1e-9;
  double qp_tol = 1e-9;

  // microscopic differences
  bool with_diff = false;
  std::size_t diff_top_q = 200;
  std::size_t grid_size = 101;

  // simulation and replication studies
  std::size_t n_a = 200;
  std::size_t n_b = 300;
  double gamma = 0.0;
  std::string study;
  std::size_t reps = 100;
  std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};

  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  bool exit_on_reject = false;
  bool record_timings = false;

  bool operator==(const RunConfig&) const = default;

  // Overrides the keys present in `flat`; unknown keys and ill-typed values
  // raise ConfigError.
  void apply(const nlohmann::json& flat);
  void apply_text(const std::string& json_text);
  nlohmann::ordered_json to_json() const;
  void validate() const;

  GraphFormat graph_format() const { return parse_format(format); }
  RestartSelection selection() const;
  GibbsConfig gibbs() const;
  EmConfig em() const;
  MStepConfig mstep(std::size_t n_min) const;
  TestSetup test_setup(std::size_t n_a, std::size_t n_b) const;
};

}  // namespace gcmp
