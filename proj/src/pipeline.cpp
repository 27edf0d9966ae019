#include "pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "errors.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace gcmp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

// Serializes log lines coming from concurrent restarts or replicates.
class SyncLog {
 public:
  explicit SyncLog(const LogFn& log) : log_(log) {}
  void operator()(const std::string& line) {
    if (!log_) return;
    std::lock_guard lock(mutex_);
    log_(line);
  }
  explicit operator bool() const { return static_cast<bool>(log_); }

 private:
  const LogFn& log_;
  std::mutex mutex_;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << x;
  return ss.str();
}

std::vector<EdgeEntry> label_edges(const Graph& g, const std::vector<EdgeScore>& scores) {
  std::vector<EdgeEntry> out;
  out.reserve(scores.size());
  for (const EdgeScore& s : scores) out.push_back({g.label(s.i), g.label(s.j), s.present, s.value});
  return out;
}

NetworkDiff network_diff(const Graph& g, std::size_t network, const NodePositions& pos, const DiffSurface& surface,
                         std::size_t q) {
  NetworkDiff d;
  d.fit = FitSummary::from(surface.fits[network]);
  d.node_impact = node_impact(g, network, pos, surface);
  const TopEdges top = top_edges(g, network, pos, surface, q);
  d.top_present = label_edges(g, top.present);
  d.top_absent = label_edges(g, top.absent);
  return d;
}

}  // namespace

CompareResult compare_graphs(Graph a, Graph b, const RunConfig& config, const LogFn& log_fn) {
  config.validate();
  const auto start = Clock::now();
  SyncLog log(log_fn);

  const std::size_t n_min = std::min(a.size(), b.size());
  const MStepConfig mstep = config.mstep(n_min);
  const TestSetup test = config.test_setup(a.size(), b.size());
  log("compare: n_a=" + std::to_string(a.size()) + " n_b=" + std::to_string(b.size()) +
      " L=" + std::to_string(mstep.L) + " K=" + std::to_string(test.K) + " restarts=" +
      std::to_string(config.restarts));

  std::function<void(std::size_t, const EmIteration&)> progress;
  if (log)
    progress = [&](std::size_t r, const EmIteration& it) {
      log("restart " + std::to_string(r) + " iteration " + std::to_string(it.iteration) + ": aicc=" +
          fmt(it.aicc, 10) + " lambda=" + fmt(it.lambda) + " df=" + fmt(it.df) + " change=" +
          fmt(it.mean_change[0]) + "/" + fmt(it.mean_change[1]) + " acceptance=" + fmt(it.acceptance[0], 3) +
          "/" + fmt(it.acceptance[1], 3));
    };
  const MultiStartResult ms =
      multi_start(a, b, config.em(), config.gibbs(), mstep, test, config.seed, progress);
  const double fit_seconds = seconds_since(start);

  CompareResult out;
  const RestartOutcome& best = ms.best();
  const EmResult& em = *best.em;
  Report& r = out.report;
  r.config = config;
  // Where the artifacts land is not part of the run; keep reports comparable across directories.
  r.config.out_dir = RunConfig{}.out_dir;
  r.fit = FitSummary::from(em.fit);
  r.positions_a = em.positions[0].values();
  r.positions_b = em.positions[1].values();
  r.test = *best.test;
  r.trace = em.trace;
  r.selected = ms.selected;
  for (const RestartOutcome& run : ms.runs) {
    RestartSummary s;
    s.index = run.index;
    s.seed = run.seed;
    s.ok = run.ok();
    s.error = run.error;
    if (run.em) {
      s.aicc = run.em->fit.aicc;
      s.em_iterations = run.em->trace.iterations.size();
      s.converged = run.em->trace.converged;
    }
    if (run.test) {
      s.t = run.test->t;
      s.p_asym = run.test->p_asymptotic;
      s.p_sim = run.test->p_simulated;
    }
    r.restarts.push_back(std::move(s));
  }
  log("selected restart " + std::to_string(ms.selected) + ": t=" + fmt(r.test.t, 6) + " cells=" +
      std::to_string(r.test.cells_used) + " p_sim=" + fmt(r.test.p_simulated) + " p_asym=" +
      fmt(r.test.p_asymptotic) + (r.test.reject_simulated ? " (reject)" : " (no rejection)"));

  double diff_seconds = 0.0;
  if (config.with_diff) {
    const auto diff_start = Clock::now();
    out.diff = diff_surface(a, em.positions[0], b, em.positions[1], mstep);
    r.diff = DiffSummary{network_diff(a, 0, em.positions[0], *out.diff, config.diff_top_q),
                         network_diff(b, 1, em.positions[1], *out.diff, config.diff_top_q)};
    diff_seconds = seconds_since(diff_start);
    log("difference surfaces: lambda_a=" + fmt(out.diff->fits[0].lambda) + " lambda_b=" +
        fmt(out.diff->fits[1].lambda));
  }
  if (config.record_timings) {
    r.timings = std::map<std::string, double>{{"fit_and_test", fit_seconds}, {"total", seconds_since(start)}};
    if (config.with_diff) (*r.timings)["diff"] = diff_seconds;
  }
  out.joint = em.fit.graphon;
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

CompareResult run_compare(const RunConfig& config, const LogFn& log) {
  config.validate();
  if (config.net_a.empty() || config.net_b.empty()) throw ConfigError("compare needs net_a and net_b");
  const GraphFormat format = config.graph_format();
  for (const auto& p : {config.net_a, config.net_b})
    if (!std::filesystem::exists(p)) throw IoError("input file does not exist: " + p);
  Graph a = load_graph(config.net_a, format, config.threshold);
  Graph b = load_graph(config.net_b, format, config.threshold);
  if (log)
    log("loaded " + config.net_a + " (" + std::to_string(a.size()) + " nodes, " + std::to_string(a.edge_count()) +
        " edges) and " + config.net_b + " (" + std::to_string(b.size()) + " nodes, " +
        std::to_string(b.edge_count()) + " edges)");
  return compare_graphs(std::move(a), std::move(b), config, log);
}

void write_compare_artifacts(const CompareResult& result, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  const RunConfig& c = result.report.config;
  write_text_file(out_dir / "report.json", dump_report(result.report));
  write_positions_csv(out_dir / "positions_a.csv", result.a, result.report.positions_a);
  write_positions_csv(out_dir / "positions_b.csv", result.b, result.report.positions_b);
  write_graphon_grid_csv(out_dir / "graphon.csv", result.joint, c.grid_size);
  write_cells_csv(out_dir / "cells.csv", result.report.test);
  if (result.diff) write_diff_grid_csv(out_dir / "diff_grid.csv", *result.diff, c.grid_size);
}

SimulatedPair simulate_pair(std::size_t n_a, std::size_t n_b, double gamma, std::uint64_t seed) {
  const Graphon truth = smooth_blockmodel_graphon();
  const Rng root(seed);
  SimulatedPair p{simulate_network({n_a, root.child(0).seed(), truth}),
                  simulate_network({n_b, root.child(1).seed(), shrink_alternative(truth, gamma)})};
  return p;
}

SimulatedPair run_simulate(const RunConfig& config) {
  config.validate();
  return simulate_pair(config.n_a, config.n_b, config.gamma, config.seed);
}

void write_simulate_artifacts(const SimulatedPair& pair, const RunConfig& config,
                              const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  const GraphFormat format = config.graph_format();
  const std::string ext = format == GraphFormat::Adjacency ? ".csv" : ".edges";
  write_graph(out_dir / ("net_a" + ext), pair.a.graph, format);
  write_graph(out_dir / ("net_b" + ext), pair.b.graph, format);
  write_positions_csv(out_dir / "truth_a.csv", pair.a.graph, pair.a.positions.values());
  write_positions_csv(out_dir / "truth_b.csv", pair.b.graph, pair.b.positions.values());
}

ReplicateResult run_replicate(const RunConfig& config, const LogFn& log_fn) {
  config.validate();
  SyncLog log(log_fn);
  ReplicateResult out;
  out.study = config.study;
  std::vector<double> gammas;
  bool oracle = true;
  if (config.study == "null-oracle") {
    gammas = {0.0};
  } else if (config.study == "power-oracle") {
    gammas = config.gammas;
  } else if (config.study == "null-estimated") {
    gammas = {0.0};
    oracle = false;
  } else {
    throw UsageError("unknown study '" + config.study + "' (expected null-oracle, null-estimated or power-oracle)");
  }
  if (gammas.empty()) throw ConfigError("power-oracle needs at least one gamma");

  const std::size_t reps = config.reps;
  const std::size_t total = gammas.size() * reps;
  out.rows.resize(total);
  RunConfig inner = config;
  inner.workers = 1;
  const std::size_t K = config.k > 0 ? config.k : choose_k(config.n_a, config.n_b, config.min_nodes_per_interval);
  log("replicate " + config.study + ": " + std::to_string(gammas.size()) + " group(s) x " + std::to_string(reps) +
      " replicates, K=" + std::to_string(K));

  std::size_t done = 0;
  std::mutex done_mutex;
  const Rng root(config.seed);
  parallel_for(total, config.workers, [&](std::size_t idx) {
    const std::size_t g = idx / reps;
    const std::size_t r = idx % reps;
    const Rng rep = root.child(g).child(r);
    ReplicateRow& row = out.rows[idx];
    row.gamma = gammas[g];
    row.replicate = r;
    row.seed = rep.seed();
    try {
      const SimulatedPair pair = simulate_pair(config.n_a, config.n_b, gammas[g], rep.seed());
      TestReport t;
      if (oracle) {
        TestOptions opts{config.alpha, config.n_sims, 1};
        t = run_test(pair.a.graph, pair.a.positions.values(), pair.b.graph, pair.b.positions.values(),
                     RectanglePartition(K), opts, rep.child(2));
      } else {
        const std::size_t n_min = std::min(config.n_a, config.n_b);
        TestSetup setup = inner.test_setup(config.n_a, config.n_b);
        const MultiStartResult ms = multi_start(pair.a.graph, pair.b.graph, inner.em(), inner.gibbs(),
                                                inner.mstep(n_min), setup, rep.child(2).seed());
        t = *ms.best().test;
      }
      row.ok = true;
      row.t = t.t;
      row.cells_used = t.cells_used;
      row.p_asym = t.p_asymptotic;
      row.p_sim = t.p_simulated;
      row.reject_asym = t.reject_asymptotic;
      row.reject_sim = t.reject_simulated;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    if (log) {
      std::lock_guard lock(done_mutex);
      ++done;
      const std::size_t step = std::max<std::size_t>(1, total / 20);
      if (done % step == 0 || done == total)
        log("replicates done: " + std::to_string(done) + "/" + std::to_string(total));
    }
  });

  for (std::size_t g = 0; g < gammas.size(); ++g) {
    ReplicateSummary s;
    s.gamma = gammas[g];
    s.reps = reps;
    std::size_t ra = 0, rs = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const ReplicateRow& row = out.rows[g * reps + r];
      if (!row.ok) continue;
      ++s.completed;
      ra += row.reject_asym;
      rs += row.reject_sim;
    }
    if (s.completed > 0) {
      s.rate_asym = static_cast<double>(ra) / static_cast<double>(s.completed);
      s.rate_sim = static_cast<double>(rs) / static_cast<double>(s.completed);
    }
    log("gamma=" + fmt(s.gamma) + ": completed " + std::to_string(s.completed) + "/" + std::to_string(s.reps) +
        ", rejection rate sim=" + fmt(s.rate_sim) + " asym=" + fmt(s.rate_asym));
    out.summary.push_back(s);
  }
  return out;
}

void write_replicate_artifacts(const ReplicateResult& result, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  std::ostringstream rows;
  rows << "study,gamma,replicate,seed,ok,t,cells_used,p_asym,p_sim,reject_asym,reject_sim,error\n";
  for (const ReplicateRow& r : result.rows) {
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    rows << result.study << ',' << format_double(r.gamma) << ',' << r.replicate << ',' << r.seed << ','
         << (r.ok ? 1 : 0) << ',' << format_double(r.t) << ',' << r.cells_used << ',' << format_double(r.p_asym)
         << ',' << format_double(r.p_sim) << ',' << (r.reject_asym ? 1 : 0) << ',' << (r.reject_sim ? 1 : 0)
         << ',' << err << '\n';
  }
  write_text_file(out_dir / "replicates.csv", rows.str());

  std::ostringstream sum;
  sum << "study,gamma,reps,completed,rate_asym,rate_sim\n";
  for (const ReplicateSummary& s : result.summary)
    sum << result.study << ',' << format_double(s.gamma) << ',' << s.reps << ',' << s.completed << ','
        << format_double(s.rate_asym) << ',' << format_double(s.rate_sim) << '\n';
  write_text_file(out_dir / "summary.csv", sum.str());
}

}  // namespace gcmp
