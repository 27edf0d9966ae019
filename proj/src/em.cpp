#include "em.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "parallel.hpp"

namespace gcmp {

namespace {

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
  throw Error(e.kind(), context + ": " + e.what());
}

// FNV-1a over the adjacency; identical networks share their random streams.
std::uint64_t fingerprint(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int s = 0; s < 64; s += 8) mix(static_cast<std::uint8_t>(g.size() >> s));
  for (const std::uint8_t x : g.adjacency()) mix(x);
  return h;
}

double mean_abs_change(const NodePositions& from, const NodePositions& to) {
  double acc = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) acc += std::abs(to[i] - from[i]);
  return acc / static_cast<double>(from.size());
}

}  // namespace

void EmConfig::validate() const {
  if (max_em_iters < 1) throw ConfigError("max_em_iters must be at least 1");
  if (n_restarts < 1) throw ConfigError("n_restarts must be at least 1");
  if (!std::isfinite(position_tol)) throw ConfigError("position_tol must be finite");
}

double EmConfig::tolerance_for(std::size_t n_a, std::size_t n_b) const {
  if (position_tol > 0.0) return position_tol;
  return 1.0 / (2.0 * static_cast<double>(std::min(n_a, n_b)));
}

NodePositions initialize_positions(std::size_t n, Rng& rng) {
  if (n < 2) throw DomainError("initialize_positions needs n >= 2");
  std::vector<double> draws(n);
  for (double& d : draws) d = rng.uniform_open();
  return rank_adjust(draws);
}

EmResult em_fit(const Graph& a, const Graph& b, const EmConfig& em, const GibbsConfig& gibbs,
                const MStepConfig& mstep, std::uint64_t seed, const EmProgress& progress) {
  em.validate();
  gibbs.validate();
  mstep.validate();
  const Rng root(seed);
  const std::array<const Graph*, 2> graphs{&a, &b};
  const double tol = em.tolerance_for(a.size(), b.size());
  const std::array<std::uint64_t, 2> stream{fingerprint(a), fingerprint(b)};

  std::array<NodePositions, 2> pos = [&] {
    const Rng init = root.child(0);
    Rng ra = init.child(stream[0]), rb = init.child(stream[1]);
    return std::array<NodePositions, 2>{initialize_positions(a.size(), ra),
                                        initialize_positions(b.size(), rb)};
  }();

  auto observations = [&] {
    return std::array<Observation, 2>{Observation{&a, &pos[0]}, Observation{&b, &pos[1]}};
  };

  EmResult out;
  std::optional<SplineGraphon> warm;
  for (std::size_t t = 1; t <= em.max_em_iters; ++t) {
    const std::string context = "EM iteration " + std::to_string(t);
    FitResult fit;
    try {
      const auto obs = observations();
      fit = select_lambda(obs, mstep, warm ? &*warm : nullptr);
    } catch (const Error& e) {
      rethrow_with_context(e, context + ", M-step");
    }
    warm = fit.graphon;

    const Rng step = root.child(t);
    std::array<ChainResult, 2> chains;
    std::array<NodePositions, 2> next = pos;
    try {
      parallel_for(2, em.workers, [&](std::size_t g) {
        GibbsConfig cfg = gibbs;
        cfg.seed = step.child(stream[g]).seed();
        chains[g] = run_chain(*graphs[g], fit.graphon, cfg, pos[g]);
        next[g] = rank_adjust(posterior_means(chains[g]));
      });
    } catch (const Error& e) {
      rethrow_with_context(e, context + ", E-step");
    }

    EmIteration rec;
    rec.iteration = t;
    rec.aicc = fit.aicc;
    rec.loglik = fit.loglik;
    rec.lambda = fit.lambda;
    rec.df = fit.df;
    for (std::size_t g = 0; g < 2; ++g) {
      rec.mean_change[g] = mean_abs_change(pos[g], next[g]);
      rec.acceptance[g] = chains[g].acceptance_rate;
    }
    out.trace.iterations.push_back(rec);
    if (progress) progress(rec);

    pos = std::move(next);
    if (rec.mean_change[0] < tol && rec.mean_change[1] < tol) {
      out.trace.converged = true;
      break;
    }
  }

  try {
    const auto obs = observations();
    out.fit = select_lambda(obs, mstep, warm ? &*warm : nullptr);
  } catch (const Error& e) {
    rethrow_with_context(e, "final M-step");
  }
  out.positions = std::move(pos);
  return out;
}

TestReport test_alignment(const Graph& a, const Graph& b, const EmResult& em, const TestSetup& test,
                          const Rng& rng) {
  const std::size_t K = test.K > 0 ? test.K : choose_k(a.size(), b.size());
  return run_test(a, em.positions[0].values(), b, em.positions[1].values(), RectanglePartition(K),
                  test.options, rng);
}

MultiStartResult multi_start(const Graph& a, const Graph& b, const EmConfig& em,
                             const GibbsConfig& gibbs, const MStepConfig& mstep,
                             const TestSetup& test, std::uint64_t seed,
                             const std::function<void(std::size_t, const EmIteration&)>& progress) {
  em.validate();
  const std::size_t R = em.n_restarts;
  const unsigned outer = std::max(1u, std::min<unsigned>(em.workers, static_cast<unsigned>(R)));
  const unsigned inner = std::max(1u, em.workers / outer);
  const bool test_all = em.selection == RestartSelection::HighestPvalue;

  EmConfig inner_em = em;
  inner_em.workers = inner;
  TestSetup inner_test = test;
  inner_test.options.workers = inner;

  MultiStartResult out;
  out.runs.resize(R);
  parallel_for(R, outer, [&](std::size_t r) {
    RestartOutcome& run = out.runs[r];
    run.index = r;
    run.seed = Rng::child_seed(seed, r);
    const Rng root(run.seed);
    try {
      EmProgress hook;
      if (progress) hook = [&](const EmIteration& it) { progress(r, it); };
      run.em = em_fit(a, b, inner_em, gibbs, mstep, root.child(0).seed(), hook);
      if (test_all) run.test = test_alignment(a, b, *run.em, inner_test, root.child(1));
    } catch (const Error& e) {
      run.em.reset();
      run.test.reset();
      run.error = e.what();
      run.error_kind = e.kind();
    } catch (const std::exception& e) {
      run.em.reset();
      run.test.reset();
      run.error = e.what();
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < R; ++r) {
    const RestartOutcome& run = out.runs[r];
    if (!run.ok()) continue;
    if (!best) {
      best = r;
      continue;
    }
    const RestartOutcome& cur = out.runs[*best];
    const bool better = test_all ? run.test->p_simulated > cur.test->p_simulated
                                 : run.em->fit.aicc < cur.em->fit.aicc;
    if (better) best = r;
  }
  if (!best) {
    std::string msg = "all " + std::to_string(R) + " restarts failed";
    for (const RestartOutcome& run : out.runs) msg += "; restart " + std::to_string(run.index) + ": " + run.error;
    throw Error(out.runs.front().error_kind, msg);
  }
  out.selected = *best;
  RestartOutcome& chosen = out.runs[*best];
  if (!chosen.test) chosen.test = test_alignment(a, b, *chosen.em, test, Rng(chosen.seed).child(1));
  return out;
}

}  // namespace gcmp
