#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "em.hpp"
#include "microdiff.hpp"
#include "twosample.hpp"

namespace gcmp {

inline constexpr const char* kReportVersion = "1.0.0";

struct FitSummary {
  std::size_t L = 0;
  double lambda = 0.0;
  double df = 0.0;
  double aicc = 0.0;
  double loglik = 0.0;
  std::vector<double> theta;
  bool ridge_used = false;

  static FitSummary from(const FitResult& fit);
  bool operator==(const FitSummary&) const = default;
};

struct RestartSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double aicc = 0.0;
  std::size_t em_iterations = 0;
  bool converged = false;
  std::optional<double> t;
  std::optional<double> p_asym;
  std::optional<double> p_sim;

  bool operator==(const RestartSummary&) const = default;
};

struct EdgeEntry {
  std::string a, b;  // node labels
  bool present = false;
  double contrib = 0.0;
  bool operator==(const EdgeEntry&) const = default;
};

struct NetworkDiff {
  FitSummary fit;
  std::vector<double> node_impact;
  std::vector<EdgeEntry> top_present;
  std::vector<EdgeEntry> top_absent;
  bool operator==(const NetworkDiff&) const = default;
};

struct DiffSummary {
  NetworkDiff a;
  NetworkDiff b;
  bool operator==(const DiffSummary&) const = default;
};

struct Report {
  std::string version = kReportVersion;
  RunConfig config;
  FitSummary fit;
  std::vector<double> positions_a;
  std::vector<double> positions_b;
  TestReport test;
  EmTrace trace;
  std::vector<RestartSummary> restarts;
  std::size_t selected = 0;
  std::optional<DiffSummary> diff;
  std::optional<std::map<std::string, double>> timings;  // seconds

  bool operator==(const Report&) const = default;
};

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// Two-space indented JSON with a trailing newline.
std::string dump_report(const Report& report);
Report parse_report(const std::string& text);

nlohmann::ordered_json test_to_json(const TestReport& test);
TestReport test_from_json(const nlohmann::json& j);

}  // namespace gcmp
