#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcmp/gcmp.h"

namespace {

const char* kSmall =
    R"({"restarts": 2, "max_em_iters": 2, "burn_in": 10, "n_keep": 5, "thinning": 2, "n_sims": 200,
        "lambda_count": 5, "workers": 1, "seed": 3})";

std::vector<std::uint8_t> ring(std::size_t n) {
  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n, k = (i + 2) % n;
    adj[i * n + j] = adj[j * n + i] = 1;
    adj[i * n + k] = adj[k * n + i] = 1;
  }
  return adj;
}

}  // namespace

TEST_CASE("status names and null handles", "[capi]") {
  CHECK(std::string(gcmp_status_name(GCMP_OK)) == "ok");
  CHECK(std::string(gcmp_status_name(GCMP_ERR_DEGENERATE)) == "degenerate test");
  CHECK(std::string(gcmp_version()) == "1.0.0");
  CHECK(gcmp_graph_load_edge_list(nullptr, nullptr) == GCMP_ERR_USAGE);
  CHECK(std::strlen(gcmp_last_error()) > 0);
  CHECK(gcmp_options_set_json(nullptr, "{}") == GCMP_ERR_USAGE);
  CHECK(gcmp_compare(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr) == GCMP_ERR_USAGE);
  CHECK(gcmp_graph_node_count(nullptr) == 0);
  CHECK(gcmp_result_json(nullptr) == std::string());
  gcmp_graph_free(nullptr);
  gcmp_options_free(nullptr);
  gcmp_result_free(nullptr);
  gcmp_string_free(nullptr);
}

TEST_CASE("errors map to status codes", "[capi]") {
  gcmp_graph* g = nullptr;
  CHECK(gcmp_graph_load_edge_list("/nonexistent/x.edges", &g) == GCMP_ERR_IO);
  const std::uint8_t loop[] = {1, 0, 0, 0};
  CHECK(gcmp_graph_from_adjacency(2, loop, &g) == GCMP_ERR_INPUT);
  CHECK(std::string(gcmp_last_error()).find("self-loop") != std::string::npos);
  CHECK(g == nullptr);

  gcmp_options* o = nullptr;
  REQUIRE(gcmp_options_create(&o) == GCMP_OK);
  CHECK(gcmp_options_set_json(o, R"({"nope": 1})") == GCMP_ERR_CONFIG);
  CHECK(gcmp_options_set_json(o, R"({"alpha": 0.2, "nope": 1})") == GCMP_ERR_CONFIG);
  char* text = nullptr;
  REQUIRE(gcmp_options_get_json(o, &text) == GCMP_OK);
  // A failed update leaves the options untouched.
  CHECK(nlohmann::json::parse(text)["alpha"] == 0.05);
  gcmp_string_free(text);

  REQUIRE(gcmp_options_set_json(o, R"({"study": "unknown-study", "reps": 1})") == GCMP_OK);
  CHECK(gcmp_replicate(o, nullptr, nullptr, "/tmp", nullptr) == GCMP_ERR_USAGE);
  REQUIRE(gcmp_options_set_json(o, R"({"net_a": "/nonexistent/a", "net_b": "/nonexistent/b"})") == GCMP_OK);
  gcmp_result* r = nullptr;
  CHECK(gcmp_compare_files(o, nullptr, nullptr, &r) == GCMP_ERR_IO);
  gcmp_options_free(o);
}

TEST_CASE("compare through the C API", "[capi]") {
  const auto adj = ring(24);
  gcmp_graph *a = nullptr, *b = nullptr;
  REQUIRE(gcmp_graph_from_adjacency(24, adj.data(), &a) == GCMP_OK);
  REQUIRE(gcmp_graph_from_adjacency(24, adj.data(), &b) == GCMP_OK);
  CHECK(gcmp_graph_node_count(a) == 24);
  CHECK(gcmp_graph_edge_count(a) == 48);

  gcmp_options* o = nullptr;
  REQUIRE(gcmp_options_create(&o) == GCMP_OK);
  REQUIRE(gcmp_options_set_json(o, kSmall) == GCMP_OK);

  std::vector<std::string> lines;
  auto log = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
  gcmp_result *r1 = nullptr, *r2 = nullptr;
  REQUIRE(gcmp_compare(a, b, o, log, &lines, &r1) == GCMP_OK);
  REQUIRE(gcmp_compare(a, b, o, nullptr, nullptr, &r2) == GCMP_OK);
  CHECK_FALSE(lines.empty());
  CHECK(std::string(gcmp_result_json(r1)) == gcmp_result_json(r2));
  CHECK(gcmp_result_statistic(r1) == 0.0);
  CHECK(gcmp_result_pvalue(r1, 1) == 1.0);
  CHECK(gcmp_result_reject(r1, 1) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "gcmp_capi_artifacts";
  std::filesystem::remove_all(dir);
  REQUIRE(gcmp_result_write_artifacts(r1, dir.c_str()) == GCMP_OK);
  for (const char* f : {"report.json", "positions_a.csv", "positions_b.csv", "graphon.csv", "cells.csv"})
    CHECK(std::filesystem::exists(dir / f));

  REQUIRE(gcmp_graph_write(a, (dir / "a.edges").c_str(), "edges") == GCMP_OK);
  gcmp_graph* back = nullptr;
  REQUIRE(gcmp_graph_load_edge_list((dir / "a.edges").c_str(), &back) == GCMP_OK);
  CHECK(gcmp_graph_edge_count(back) == 48);
  CHECK(gcmp_graph_write(a, (dir / "a.x").c_str(), "xml") == GCMP_ERR_CONFIG);

  gcmp_graph_free(back);
  gcmp_result_free(r1);
  gcmp_result_free(r2);
  gcmp_graph_free(a);
  gcmp_graph_free(b);
  gcmp_options_free(o);
  std::filesystem::remove_all(dir);
}

TEST_CASE("simulate and replicate through the C API", "[capi]") {
  gcmp_options* o = nullptr;
  REQUIRE(gcmp_options_create(&o) == GCMP_OK);
  REQUIRE(gcmp_options_set_json(o, R"({"n_a": 40, "n_b": 50, "gamma": 0.5, "seed": 9, "study": "power-oracle",
                                       "reps": 3, "gammas": [0, 1], "n_sims": 100, "workers": 1})") == GCMP_OK);
  const auto dir = std::filesystem::temp_directory_path() / "gcmp_capi_sim";
  std::filesystem::remove_all(dir);
  REQUIRE(gcmp_simulate(o, dir.c_str()) == GCMP_OK);
  CHECK(std::filesystem::exists(dir / "net_a.edges"));
  CHECK(std::filesystem::exists(dir / "truth_b.csv"));

  char* summary = nullptr;
  REQUIRE(gcmp_replicate(o, nullptr, nullptr, dir.c_str(), &summary) == GCMP_OK);
  const auto j = nlohmann::json::parse(summary);
  gcmp_string_free(summary);
  CHECK(j["study"] == "power-oracle");
  CHECK(j["groups"].size() == 2);
  CHECK(std::filesystem::exists(dir / "replicates.csv"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  gcmp_options_free(o);
  std::filesystem::remove_all(dir);
}
