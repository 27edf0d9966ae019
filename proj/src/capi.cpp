#include "gcmp/gcmp.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "io.hpp"
#include "pipeline.hpp"

struct gcmp_graph {
  gcmp::Graph graph;
};

struct gcmp_options {
  gcmp::RunConfig config;
};

struct gcmp_result {
  gcmp::CompareResult result;
  std::string json;
};

namespace {

thread_local std::string last_error;

gcmp_status status_of(gcmp::ErrorKind kind) {
  switch (kind) {
    case gcmp::ErrorKind::Domain: return GCMP_ERR_DOMAIN;
    case gcmp::ErrorKind::Usage: return GCMP_ERR_USAGE;
    case gcmp::ErrorKind::Input: return GCMP_ERR_INPUT;
    case gcmp::ErrorKind::Numerical: return GCMP_ERR_NUMERICAL;
    case gcmp::ErrorKind::Config: return GCMP_ERR_CONFIG;
    case gcmp::ErrorKind::Degenerate: return GCMP_ERR_DEGENERATE;
    case gcmp::ErrorKind::Io: return GCMP_ERR_IO;
  }
  return GCMP_ERR_INTERNAL;
}

template <typename F>
gcmp_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return GCMP_OK;
  } catch (const gcmp::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return GCMP_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw gcmp::UsageError(std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gcmp::LogFn make_log(gcmp_log_fn log, void* user) {
  if (!log) return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

gcmp_result* wrap(gcmp::CompareResult r) {
  auto* out = new gcmp_result{std::move(r), {}};
  out->json = gcmp::dump_report(out->result.report);
  return out;
}

}  // namespace

extern "C" {

const char* gcmp_version(void) { return gcmp::kReportVersion; }

const char* gcmp_last_error(void) { return last_error.c_str(); }

const char* gcmp_status_name(gcmp_status status) {
  switch (status) {
    case GCMP_OK: return "ok";
    case GCMP_ERR_DOMAIN: return "domain error";
    case GCMP_ERR_USAGE: return "usage error";
    case GCMP_ERR_INPUT: return "input error";
    case GCMP_ERR_NUMERICAL: return "numerical error";
    case GCMP_ERR_CONFIG: return "configuration error";
    case GCMP_ERR_DEGENERATE: return "degenerate test";
    case GCMP_ERR_IO: return "i/o error";
    case GCMP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gcmp_string_free(char* s) { std::free(s); }

gcmp_status gcmp_graph_load_edge_list(const char* path, gcmp_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gcmp_graph{gcmp::parse_edge_list(std::filesystem::path(path))};
  });
}

gcmp_status gcmp_graph_load_adjacency(const char* path, int has_threshold, double threshold, gcmp_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::optional<double> t;
    if (has_threshold) t = threshold;
    *out = new gcmp_graph{gcmp::parse_adjacency(std::filesystem::path(path), t)};
  });
}

gcmp_status gcmp_graph_from_adjacency(size_t n, const uint8_t* adj, gcmp_graph** out) {
  return guarded([&] {
    require(adj, "adj");
    require(out, "out");
    if (n < 2) throw gcmp::InputError("a graph needs at least 2 nodes");
    *out = new gcmp_graph{gcmp::Graph(n, std::vector<std::uint8_t>(adj, adj + n * n))};
  });
}

size_t gcmp_graph_node_count(const gcmp_graph* g) { return g ? g->graph.size() : 0; }

size_t gcmp_graph_edge_count(const gcmp_graph* g) { return g ? g->graph.edge_count() : 0; }

gcmp_status gcmp_graph_write(const gcmp_graph* g, const char* path, const char* format) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    require(format, "format");
    gcmp::write_graph(path, g->graph, gcmp::parse_format(format));
  });
}

void gcmp_graph_free(gcmp_graph* g) { delete g; }

gcmp_status gcmp_options_create(gcmp_options** out) {
  return guarded([&] {
    require(out, "out");
    *out = new gcmp_options{};
  });
}

gcmp_status gcmp_options_set_json(gcmp_options* opts, const char* flat_json) {
  return guarded([&] {
    require(opts, "options");
    require(flat_json, "json");
    gcmp::RunConfig updated = opts->config;
    updated.apply_text(flat_json);
    opts->config = std::move(updated);
  });
}

gcmp_status gcmp_options_get_json(const gcmp_options* opts, char** out_json) {
  return guarded([&] {
    require(opts, "options");
    require(out_json, "out");
    *out_json = copy_string(opts->config.to_json().dump(2));
  });
}

void gcmp_options_free(gcmp_options* opts) { delete opts; }

gcmp_status gcmp_compare(const gcmp_graph* a, const gcmp_graph* b, const gcmp_options* opts, gcmp_log_fn log,
                         void* user, gcmp_result** out) {
  return guarded([&] {
    require(a, "graph a");
    require(b, "graph b");
    require(opts, "options");
    require(out, "out");
    *out = wrap(gcmp::compare_graphs(a->graph, b->graph, opts->config, make_log(log, user)));
  });
}

gcmp_status gcmp_compare_files(const gcmp_options* opts, gcmp_log_fn log, void* user, gcmp_result** out) {
  return guarded([&] {
    require(opts, "options");
    require(out, "out");
    *out = wrap(gcmp::run_compare(opts->config, make_log(log, user)));
  });
}

const char* gcmp_result_json(const gcmp_result* r) { return r ? r->json.c_str() : ""; }

double gcmp_result_statistic(const gcmp_result* r) { return r ? r->result.report.test.t : 0.0; }

double gcmp_result_pvalue(const gcmp_result* r, int simulated) {
  if (!r) return 1.0;
  const auto& t = r->result.report.test;
  return simulated ? t.p_simulated : t.p_asymptotic;
}

int gcmp_result_reject(const gcmp_result* r, int simulated) {
  if (!r) return 0;
  const auto& t = r->result.report.test;
  return (simulated ? t.reject_simulated : t.reject_asymptotic) ? 1 : 0;
}

gcmp_status gcmp_result_write_artifacts(const gcmp_result* r, const char* out_dir) {
  return guarded([&] {
    require(r, "result");
    require(out_dir, "out_dir");
    gcmp::write_compare_artifacts(r->result, out_dir);
  });
}

void gcmp_result_free(gcmp_result* r) { delete r; }

gcmp_status gcmp_simulate(const gcmp_options* opts, const char* out_dir) {
  return guarded([&] {
    require(opts, "options");
    require(out_dir, "out_dir");
    gcmp::write_simulate_artifacts(gcmp::run_simulate(opts->config), opts->config, out_dir);
  });
}

gcmp_status gcmp_replicate(const gcmp_options* opts, gcmp_log_fn log, void* user, const char* out_dir,
                           char** summary_json) {
  return guarded([&] {
    require(opts, "options");
    require(out_dir, "out_dir");
    const gcmp::ReplicateResult r = gcmp::run_replicate(opts->config, make_log(log, user));
    gcmp::write_replicate_artifacts(r, out_dir);
    if (summary_json) {
      nlohmann::ordered_json j;
      j["study"] = r.study;
      j["groups"] = nlohmann::ordered_json::array();
      for (const auto& s : r.summary)
        j["groups"].push_back({{"gamma", s.gamma},
                               {"reps", s.reps},
                               {"completed", s.completed},
                               {"rate_asym", s.rate_asym},
                               {"rate_sim", s.rate_sim}});
      *summary_json = copy_string(j.dump(2));
    }
  });
}

}  // extern "C"
