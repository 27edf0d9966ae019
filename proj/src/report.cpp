#include "report.hpp"

#include "errors.hpp"

namespace gcmp {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson fit_to_json(const FitSummary& f) {
  ojson j;
  j["L"] = f.L;
  j["lambda"] = f.lambda;
  j["df"] = f.df;
  j["aicc"] = f.aicc;
  j["loglik"] = f.loglik;
  j["ridge_used"] = f.ridge_used;
  j["theta"] = f.theta;
  return j;
}

FitSummary fit_from_json(const json& j) {
  FitSummary f;
  f.L = j.at("L").get<std::size_t>();
  f.lambda = j.at("lambda").get<double>();
  f.df = j.at("df").get<double>();
  f.aicc = j.at("aicc").get<double>();
  f.loglik = j.at("loglik").get<double>();
  f.ridge_used = j.at("ridge_used").get<bool>();
  f.theta = j.at("theta").get<std::vector<double>>();
  return f;
}

ojson trace_to_json(const EmTrace& t) {
  ojson j;
  j["converged"] = t.converged;
  j["iterations"] = ojson::array();
  for (const EmIteration& it : t.iterations) {
    ojson r;
    r["iteration"] = it.iteration;
    r["aicc"] = it.aicc;
    r["loglik"] = it.loglik;
    r["lambda"] = it.lambda;
    r["df"] = it.df;
    r["mean_change"] = {it.mean_change[0], it.mean_change[1]};
    r["acceptance"] = {it.acceptance[0], it.acceptance[1]};
    j["iterations"].push_back(std::move(r));
  }
  return j;
}

EmTrace trace_from_json(const json& j) {
  EmTrace t;
  t.converged = j.at("converged").get<bool>();
  for (const json& r : j.at("iterations")) {
    EmIteration it;
    it.iteration = r.at("iteration").get<std::size_t>();
    it.aicc = r.at("aicc").get<double>();
    it.loglik = r.at("loglik").get<double>();
    it.lambda = r.at("lambda").get<double>();
    it.df = r.at("df").get<double>();
    it.mean_change = r.at("mean_change").get<std::array<double, 2>>();
    it.acceptance = r.at("acceptance").get<std::array<double, 2>>();
    t.iterations.push_back(it);
  }
  return t;
}

template <typename T>
ojson optional_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

ojson restart_to_json(const RestartSummary& r) {
  ojson j;
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  j["error"] = r.error;
  j["aicc"] = r.aicc;
  j["em_iterations"] = r.em_iterations;
  j["converged"] = r.converged;
  j["t"] = optional_json(r.t);
  j["p_asym"] = optional_json(r.p_asym);
  j["p_sim"] = optional_json(r.p_sim);
  return j;
}

RestartSummary restart_from_json(const json& j) {
  RestartSummary r;
  r.index = j.at("index").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ok = j.at("ok").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.aicc = j.at("aicc").get<double>();
  r.em_iterations = j.at("em_iterations").get<std::size_t>();
  r.converged = j.at("converged").get<bool>();
  r.t = optional_from<double>(j, "t");
  r.p_asym = optional_from<double>(j, "p_asym");
  r.p_sim = optional_from<double>(j, "p_sim");
  return r;
}

ojson edges_to_json(const std::vector<EdgeEntry>& edges) {
  ojson arr = ojson::array();
  for (const EdgeEntry& e : edges)
    arr.push_back(ojson{{"a", e.a}, {"b", e.b}, {"present", e.present}, {"contrib", e.contrib}});
  return arr;
}

std::vector<EdgeEntry> edges_from_json(const json& j) {
  std::vector<EdgeEntry> out;
  for (const json& e : j)
    out.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.at("present").get<bool>(),
                   e.at("contrib").get<double>()});
  return out;
}

ojson network_diff_to_json(const NetworkDiff& d) {
  ojson j;
  j["fit"] = fit_to_json(d.fit);
  j["node_impact"] = d.node_impact;
  j["top_present"] = edges_to_json(d.top_present);
  j["top_absent"] = edges_to_json(d.top_absent);
  return j;
}

NetworkDiff network_diff_from_json(const json& j) {
  NetworkDiff d;
  d.fit = fit_from_json(j.at("fit"));
  d.node_impact = j.at("node_impact").get<std::vector<double>>();
  d.top_present = edges_from_json(j.at("top_present"));
  d.top_absent = edges_from_json(j.at("top_absent"));
  return d;
}

}  // namespace

FitSummary FitSummary::from(const FitResult& fit) {
  return {fit.graphon.basis_size(), fit.lambda, fit.df, fit.aicc, fit.loglik, fit.graphon.theta(), fit.ridge_used};
}

ojson test_to_json(const TestReport& t) {
  ojson j;
  j["K"] = t.K;
  j["t"] = t.t;
  j["df"] = t.df;
  j["cells_used"] = t.cells_used;
  j["p_asym"] = t.p_asymptotic;
  j["p_sim"] = t.p_simulated;
  j["crit_asym"] = t.crit_asymptotic;
  j["crit_sim"] = t.crit_simulated;
  j["alpha"] = t.alpha;
  j["n_sims"] = t.n_sims;
  j["reject_asym"] = t.reject_asymptotic;
  j["reject_sim"] = t.reject_simulated;
  j["contributions"] = ojson::array();
  for (const CellTerm& c : t.contributions) {
    ojson cell;
    cell["k"] = c.counts.k;
    cell["l"] = c.counts.l;
    cell["d1"] = c.counts.d1;
    cell["d2"] = c.counts.d2;
    cell["m1"] = c.counts.m1;
    cell["m2"] = c.counts.m2;
    cell["E1"] = c.E1;
    cell["V1"] = c.V1;
    cell["contrib"] = c.contribution;
    cell["used"] = c.used;
    j["contributions"].push_back(std::move(cell));
  }
  return j;
}

TestReport test_from_json(const json& j) {
  TestReport t;
  t.K = j.at("K").get<std::size_t>();
  t.t = j.at("t").get<double>();
  t.df = j.at("df").get<std::size_t>();
  t.cells_used = j.at("cells_used").get<std::size_t>();
  t.p_asymptotic = j.at("p_asym").get<double>();
  t.p_simulated = j.at("p_sim").get<double>();
  t.crit_asymptotic = j.at("crit_asym").get<double>();
  t.crit_simulated = j.at("crit_sim").get<double>();
  t.alpha = j.at("alpha").get<double>();
  t.n_sims = j.at("n_sims").get<std::size_t>();
  t.reject_asymptotic = j.at("reject_asym").get<bool>();
  t.reject_simulated = j.at("reject_sim").get<bool>();
  for (const json& cell : j.at("contributions")) {
    CellTerm c;
    c.counts.k = cell.at("k").get<std::size_t>();
    c.counts.l = cell.at("l").get<std::size_t>();
    c.counts.d1 = cell.at("d1").get<std::int64_t>();
    c.counts.d2 = cell.at("d2").get<std::int64_t>();
    c.counts.m1 = cell.at("m1").get<std::int64_t>();
    c.counts.m2 = cell.at("m2").get<std::int64_t>();
    c.E1 = cell.at("E1").get<double>();
    c.V1 = cell.at("V1").get<double>();
    c.contribution = cell.at("contrib").get<double>();
    c.used = cell.at("used").get<bool>();
    t.contributions.push_back(c);
  }
  return t;
}

ojson to_json(const Report& r) {
  ojson j;
  j["version"] = r.version;
  j["config"] = r.config.to_json();
  j["config"].erase("out_dir");
  j["fit"] = fit_to_json(r.fit);
  j["positions"] = ojson{{"a", r.positions_a}, {"b", r.positions_b}};
  j["test"] = test_to_json(r.test);
  j["trace"] = trace_to_json(r.trace);
  ojson runs = ojson::array();
  for (const RestartSummary& s : r.restarts) runs.push_back(restart_to_json(s));
  j["restarts"] = ojson{{"selected", r.selected}, {"runs", std::move(runs)}};
  if (r.diff) j["diff"] = ojson{{"a", network_diff_to_json(r.diff->a)}, {"b", network_diff_to_json(r.diff->b)}};
  if (r.timings) {
    ojson t = ojson::object();
    for (const auto& [k, v] : *r.timings) t[k] = v;
    j["timings"] = std::move(t);
  }
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.version = j.at("version").get<std::string>();
    r.config.apply(j.at("config"));
    r.fit = fit_from_json(j.at("fit"));
    r.positions_a = j.at("positions").at("a").get<std::vector<double>>();
    r.positions_b = j.at("positions").at("b").get<std::vector<double>>();
    r.test = test_from_json(j.at("test"));
    r.trace = trace_from_json(j.at("trace"));
    r.selected = j.at("restarts").at("selected").get<std::size_t>();
    for (const json& s : j.at("restarts").at("runs")) r.restarts.push_back(restart_from_json(s));
    if (j.contains("diff"))
      r.diff = DiffSummary{network_diff_from_json(j.at("diff").at("a")), network_diff_from_json(j.at("diff").at("b"))};
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const Report& report) { return to_json(report).dump(2) + "\n"; }

Report parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace gcmp
