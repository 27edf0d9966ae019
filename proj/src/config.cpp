#include "config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "errors.hpp"

namespace gcmp {

namespace {

using json = nlohmann::json;

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
      return v.get<T>();
    } else {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError("");
      return static_cast<T>(v.get<std::uint64_t>());
    }
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type (" + v.dump() + ")");
  }
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

template <typename T>
Setter field(T RunConfig::*member) {
  return [member](RunConfig& c, const json& v, const std::string& key) { c.*member = get_as<T>(v, key); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["net_a"] = field(&RunConfig::net_a);
    t["net_b"] = field(&RunConfig::net_b);
    t["format"] = field(&RunConfig::format);
    t["threshold"] = [](RunConfig& c, const json& v, const std::string& key) {
      if (v.is_null()) c.threshold.reset();
      else c.threshold = get_as<double>(v, key);
    };
    t["out_dir"] = field(&RunConfig::out_dir);
    t["k"] = [](RunConfig& c, const json& v, const std::string& key) {
      if (v.is_string() && v.get<std::string>() == "auto") c.k = 0;
      else c.k = get_as<std::size_t>(v, key);
    };
    t["min_nodes_per_interval"] = field(&RunConfig::min_nodes_per_interval);
    t["alpha"] = field(&RunConfig::alpha);
    t["n_sims"] = field(&RunConfig::n_sims);
    t["restarts"] = field(&RunConfig::restarts);
    t["select"] = field(&RunConfig::select);
    t["max_em_iters"] = field(&RunConfig::max_em_iters);
    t["position_tol"] = field(&RunConfig::position_tol);
    t["sigma_v"] = field(&RunConfig::sigma_v);
    t["burn_in"] = field(&RunConfig::burn_in);
    t["thinning"] = field(&RunConfig::thinning);
    t["n_keep"] = field(&RunConfig::n_keep);
    t["adapt"] = field(&RunConfig::adapt);
    t["basis_size"] = field(&RunConfig::basis_size);
    t["lambda_min"] = field(&RunConfig::lambda_min);
    t["lambda_max"] = field(&RunConfig::lambda_max);
    t["lambda_count"] = field(&RunConfig::lambda_count);
    t["max_scoring_iters"] = field(&RunConfig::max_scoring_iters);
    t["scoring_tol"] = field(&RunConfig::scoring_tol);
    t["qp_tol"] = field(&RunConfig::qp_tol);
    t["with_diff"] = field(&RunConfig::with_diff);
    t["diff_top_q"] = field(&RunConfig::diff_top_q);
    t["grid_size"] = field(&RunConfig::grid_size);
    t["n_a"] = field(&RunConfig::n_a);
    t["n_b"] = field(&RunConfig::n_b);
    t["gamma"] = field(&RunConfig::gamma);
    t["study"] = field(&RunConfig::study);
    t["reps"] = field(&RunConfig::reps);
    t["gammas"] = [](RunConfig& c, const json& v, const std::string& key) {
      if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
      std::vector<double> g;
      for (const auto& x : v) g.push_back(get_as<double>(x, key));
      c.gammas = std::move(g);
    };
    t["seed"] = field(&RunConfig::seed);
    t["workers"] = field(&RunConfig::workers);
    t["exit_on_reject"] = field(&RunConfig::exit_on_reject);
    t["record_timings"] = field(&RunConfig::record_timings);
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::apply(const json& flat) {
  if (!flat.is_object()) throw ConfigError("configuration must be a JSON object");
  const auto& table = setters();
  for (const auto& [key, value] : flat.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(*this, value, key);
  }
}

void RunConfig::apply_text(const std::string& json_text) {
  json parsed;
  try {
    parsed = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  apply(parsed);
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["net_a"] = net_a;
  j["net_b"] = net_b;
  j["format"] = format;
  j["threshold"] = threshold ? nlohmann::ordered_json(*threshold) : nlohmann::ordered_json(nullptr);
  j["out_dir"] = out_dir;
  j["k"] = k;
  j["min_nodes_per_interval"] = min_nodes_per_interval;
  j["alpha"] = alpha;
  j["n_sims"] = n_sims;
  j["restarts"] = restarts;
  j["select"] = select;
  j["max_em_iters"] = max_em_iters;
  j["position_tol"] = position_tol;
  j["sigma_v"] = sigma_v;
  j["burn_in"] = burn_in;
  j["thinning"] = thinning;
  j["n_keep"] = n_keep;
  j["adapt"] = adapt;
  j["basis_size"] = basis_size;
  j["lambda_min"] = lambda_min;
  j["lambda_max"] = lambda_max;
  j["lambda_count"] = lambda_count;
  j["max_scoring_iters"] = max_scoring_iters;
  j["scoring_tol"] = scoring_tol;
  j["qp_tol"] = qp_tol;
  j["with_diff"] = with_diff;
  j["diff_top_q"] = diff_top_q;
  j["grid_size"] = grid_size;
  j["n_a"] = n_a;
  j["n_b"] = n_b;
  j["gamma"] = gamma;
  j["study"] = study;
  j["reps"] = reps;
  j["gammas"] = gammas;
  j["seed"] = seed;
  j["workers"] = workers;
  j["exit_on_reject"] = exit_on_reject;
  j["record_timings"] = record_timings;
  return j;
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (n_sims < 1) throw ConfigError("n_sims must be at least 1");
  if (restarts < 1) throw ConfigError("restarts must be at least 1");
  if (min_nodes_per_interval < 1) throw ConfigError("min_nodes_per_interval must be at least 1");
  if (select != "pvalue" && select != "aicc") throw ConfigError("select must be pvalue or aicc");
  parse_format(format);
  if (!(lambda_min > 0.0 && lambda_max >= lambda_min)) throw ConfigError("need 0 < lambda_min <= lambda_max");
  if (lambda_count < 1) throw ConfigError("lambda_count must be at least 1");
  if (basis_size == 1) throw ConfigError("basis_size must be 0 (auto) or at least 2");
  if (grid_size < 2) throw ConfigError("grid_size must be at least 2");
  if (n_a < 2 || n_b < 2) throw ConfigError("simulated networks need at least 2 nodes");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  for (const double g : gammas)
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("gammas must lie in [0, 1]");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  gibbs().validate();
  em().validate();
}

RestartSelection RunConfig::selection() const {
  if (select == "pvalue") return RestartSelection::HighestPvalue;
  if (select == "aicc") return RestartSelection::LowestAicc;
  throw ConfigError("select must be pvalue or aicc");
}

GibbsConfig RunConfig::gibbs() const {
  GibbsConfig g;
  g.sigma_v = sigma_v;
  g.burn_in = burn_in;
  g.thinning = thinning;
  g.n_keep = n_keep;
  g.adapt = adapt;
  return g;
}

EmConfig RunConfig::em() const {
  EmConfig e;
  e.max_em_iters = max_em_iters;
  e.position_tol = position_tol;
  e.n_restarts = restarts;
  e.selection = selection();
  e.workers = workers;
  return e;
}

MStepConfig RunConfig::mstep(std::size_t n_min) const {
  MStepConfig m = default_mstep_config(n_min);
  if (basis_size > 0) m.L = basis_size;
  m.lambda_grid.clear();
  if (lambda_count == 1) {
    m.lambda_grid.push_back(lambda_min);
  } else {
    const double lo = std::log10(lambda_min), hi = std::log10(lambda_max);
    for (std::size_t i = 0; i < lambda_count; ++i)
      m.lambda_grid.push_back(std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) /
                                                     static_cast<double>(lambda_count - 1)));
  }
  m.max_scoring_iters = max_scoring_iters;
  m.scoring_tol = scoring_tol;
  m.qp_tol = qp_tol;
  return m;
}

TestSetup RunConfig::test_setup(std::size_t na, std::size_t nb) const {
  TestSetup t;
  t.K = k > 0 ? k : choose_k(na, nb, min_nodes_per_interval);
  t.options.alpha = alpha;
  t.options.n_sims = n_sims;
  t.options.workers = workers;
  return t;
}

}  // namespace gcmp
