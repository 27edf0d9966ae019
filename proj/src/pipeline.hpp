#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "microdiff.hpp"
#include "report.hpp"
#include "simulate.hpp"

namespace gcmp {

using LogFn = std::function<void(const std::string&)>;

struct CompareResult {
  Graph a;
  Graph b;
  Report report;
  SplineGraphon joint;
  std::optional<DiffSurface> diff;
};

// Multi-start fit, test of the selected alignment and, with with_diff set,
// the microscopic difference analysis.
CompareResult compare_graphs(Graph a, Graph b, const RunConfig& config, const LogFn& log = {});
// Loads net_a / net_b as configured, then compare_graphs.
CompareResult run_compare(const RunConfig& config, const LogFn& log = {});
// report.json, positions_a.csv, positions_b.csv, graphon.csv, cells.csv and,
// with a diff, diff_grid.csv.
void write_compare_artifacts(const CompareResult& result, const std::filesystem::path& out_dir);

struct SimulatedPair {
  SimulatedNetwork a;
  SimulatedNetwork b;
};

// Network a from the smooth blockmodel graphon, network b from its shrinkage
// towards the mean by `gamma`. Streams: Rng(seed).child(0) and child(1).
SimulatedPair simulate_pair(std::size_t n_a, std::size_t n_b, double gamma, std::uint64_t seed);
SimulatedPair run_simulate(const RunConfig& config);
// net_a/net_b (.edges or .csv per format), truth_a.csv, truth_b.csv.
void write_simulate_artifacts(const SimulatedPair& pair, const RunConfig& config,
                              const std::filesystem::path& out_dir);

struct ReplicateRow {
  double gamma = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double t = 0.0;
  std::size_t cells_used = 0;
  double p_asym = 1.0;
  double p_sim = 1.0;
  bool reject_asym = false;
  bool reject_sim = false;
};

struct ReplicateSummary {
  double gamma = 0.0;
  std::size_t reps = 0;
  std::size_t completed = 0;
  double rate_asym = 0.0;
  double rate_sim = 0.0;
};

struct ReplicateResult {
  std::string study;
  std::vector<ReplicateRow> rows;
  std::vector<ReplicateSummary> summary;
};

// Studies: null-oracle and power-oracle test at the true positions;
// null-estimated runs the full multi-start pipeline per replicate. Group g,
// replicate r uses Rng(seed).child(g).child(r); its networks come from
// simulate_pair with that stream's seed and the test or fit uses its child(2).
ReplicateResult run_replicate(const RunConfig& config, const LogFn& log = {});
// replicates.csv and summary.csv
void write_replicate_artifacts(const ReplicateResult& result, const std::filesystem::path& out_dir);

}  // namespace gcmp
