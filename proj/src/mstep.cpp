#include "mstep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boxqp.hpp"
#include "errors.hpp"
#include "estep.hpp"

namespace gcmp {

namespace {

constexpr int kMaxHalvings = 20;

double clip(double w) { return std::clamp(w, kProbClip, 1.0 - kProbClip); }

std::size_t basis_size_of(std::span<const double> theta) {
  const auto L = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(theta.size()))));
  if (L < 2 || L * L != theta.size()) throw UsageError("theta length must be a square L*L with L >= 2");
  return L;
}

void check_observations(std::span<const Observation> obs) {
  if (obs.empty()) throw UsageError("no observations");
  for (const auto& o : obs)
    if (o.graph->size() != o.positions->size())
      throw UsageError("positions do not match graph size");
}

// Visits every ordered pair (i, j), i != j, with the four nonzero tensor
// entries of B(u_i) (x) B(u_j) as (full index, weight).
template <typename Fn>
void for_each_ordered_pair(std::size_t L, std::span<const Observation> obs, Fn&& fn) {
  check_observations(obs);
  for (const auto& o : obs) {
    const std::size_t n = o.graph->size();
    std::vector<HatPair> hats(n);
    for (std::size_t i = 0; i < n; ++i) hats[i] = hat_pair(L, (*o.positions)[i]);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const HatPair& a = hats[i];
        const HatPair& b = hats[j];
        const std::size_t idx[4] = {a.index * L + b.index, a.index * L + b.index + 1,
                                    (a.index + 1) * L + b.index, (a.index + 1) * L + b.index + 1};
        const double wt[4] = {a.lower * b.lower, a.lower * b.upper, a.upper * b.lower,
                              a.upper * b.upper};
        fn(o.graph->edge(i, j), idx, wt);
      }
    }
  }
}

double dot4(std::span<const double> theta, const std::size_t* idx, const double* wt) {
  return wt[0] * theta[idx[0]] + wt[1] * theta[idx[1]] + wt[2] * theta[idx[2]] + wt[3] * theta[idx[3]];
}

}  // namespace

// ---------------------------------------------------------------------------

void MStepConfig::validate() const {
  if (L < 2) throw ConfigError("basis size L must be at least 2");
  if (lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] >= 0.0)) throw ConfigError("lambda values must be nonnegative");
    if (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1]))
      throw ConfigError("lambda grid must be sorted ascending");
  }
  if (!(scoring_tol > 0.0) || !(qp_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (max_scoring_iters < 1) throw ConfigError("max_scoring_iters must be at least 1");
}

std::size_t default_basis_size(std::size_t n_min) {
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_min))));
  return std::clamp<std::size_t>(root, 8, 25);
}

std::vector<double> default_lambda_grid() {
  constexpr int count = 25;
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) grid[k] = std::pow(10.0, -2.0 + 8.0 * k / (count - 1));
  return grid;
}

MStepConfig default_mstep_config(std::size_t n_min) {
  MStepConfig c;
  c.L = default_basis_size(n_min);
  c.lambda_grid = default_lambda_grid();
  return c;
}

// ---------------------------------------------------------------------------
// Full-parameter quantities

double log_likelihood(std::span<const double> theta, std::span<const Observation> obs) {
  const std::size_t L = basis_size_of(theta);
  double acc = 0.0;
  for_each_ordered_pair(L, obs, [&](bool y, const std::size_t* idx, const double* wt) {
    const double w = clip(dot4(theta, idx, wt));
    acc += y ? std::log(w) : std::log(1.0 - w);
  });
  return acc;
}

Eigen::VectorXd score(std::span<const double> theta, std::span<const Observation> obs) {
  const std::size_t L = basis_size_of(theta);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(L * L));
  for_each_ordered_pair(L, obs, [&](bool y, const std::size_t* idx, const double* wt) {
    const double w = clip(dot4(theta, idx, wt));
    const double r = y ? 1.0 / w : -1.0 / (1.0 - w);
    for (int a = 0; a < 4; ++a) s(static_cast<Eigen::Index>(idx[a])) += r * wt[a];
  });
  return s;
}

Eigen::MatrixXd fisher_info(std::span<const double> theta, std::span<const Observation> obs) {
  const std::size_t L = basis_size_of(theta);
  const auto d = static_cast<Eigen::Index>(L * L);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
  for_each_ordered_pair(L, obs, [&](bool, const std::size_t* idx, const double* wt) {
    const double w = clip(dot4(theta, idx, wt));
    const double c = 1.0 / (w * (1.0 - w));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        F(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b])) += c * wt[a] * wt[b];
  });
  return F;
}

Eigen::MatrixXd penalty_matrix(std::size_t L) {
  if (L < 2) throw DomainError("penalty matrix needs L >= 2");
  const auto n = static_cast<Eigen::Index>(L);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n - 1, n);
  for (Eigen::Index r = 0; r < n - 1; ++r) {
    J(r, r) = 1.0;
    J(r, r + 1) = -1.0;
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  auto kron = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < A.cols(); ++j)
        K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
  };
  const Eigen::MatrixXd D1 = kron(J, I);
  const Eigen::MatrixXd D2 = kron(I, J);
  return D1.transpose() * D1 + D2.transpose() * D2;
}

PenalizedQuantities penalized_quantities(std::span<const double> theta, double lambda,
                                         std::span<const Observation> obs) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const std::size_t L = basis_size_of(theta);
  const Eigen::MatrixXd P = penalty_matrix(L);
  const Eigen::Map<const Eigen::VectorXd> t(theta.data(), static_cast<Eigen::Index>(theta.size()));
  PenalizedQuantities q;
  q.loglik = log_likelihood(theta, obs) - 0.5 * lambda * t.dot(P * t);
  q.score = score(theta, obs) - lambda * (P * t);
  q.fisher = fisher_info(theta, obs) + lambda * P;
  return q;
}

// ---------------------------------------------------------------------------
// Folded likelihood

Eigen::MatrixXd expansion_matrix(std::size_t L) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L * L),
                                            static_cast<Eigen::Index>(folded_size(L)));
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t l = 0; l < L; ++l)
      E(static_cast<Eigen::Index>(k * L + l), static_cast<Eigen::Index>(folded_index(L, k, l))) = 1.0;
  return E;
}

FoldedLikelihood::FoldedLikelihood(std::size_t L, std::span<const Observation> obs) : L_(L) {
  if (L < 2) throw ConfigError("basis size L must be at least 2");
  check_observations(obs);
  std::size_t edges = 0;
  for (const auto& o : obs) {
    const std::size_t n = o.graph->size();
    std::vector<HatPair> hats(n);
    for (std::size_t i = 0; i < n; ++i) hats[i] = hat_pair(L, (*o.positions)[i]);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const HatPair& a = hats[i];
        const HatPair& b = hats[j];
        Dyad d{{folded_index(L, a.index, b.index), folded_index(L, a.index, b.index + 1),
                folded_index(L, a.index + 1, b.index), folded_index(L, a.index + 1, b.index + 1)},
               {a.lower * b.lower, a.lower * b.upper, a.upper * b.lower, a.upper * b.upper},
               o.graph->edge(i, j)};
        edges += d.y ? 1 : 0;
        dyads_.push_back(d);
      }
    }
    n_ordered_dyads_ += static_cast<double>(n * (n - 1));
  }
  pooled_density_ = 2.0 * static_cast<double>(edges) / n_ordered_dyads_;
  const Eigen::MatrixXd E = expansion_matrix(L);
  penalty_ = E.transpose() * penalty_matrix(L) * E;
}

// Each unordered dyad stands for the two ordered pairs (i, j) and (j, i),
// which share the same folded design row.
double FoldedLikelihood::loglik(const Eigen::VectorXd& phi) const {
  double acc = 0.0;
  for (const Dyad& d : dyads_) {
    const double w = clip(d.weight[0] * phi(d.idx[0]) + d.weight[1] * phi(d.idx[1]) +
                          d.weight[2] * phi(d.idx[2]) + d.weight[3] * phi(d.idx[3]));
    acc += d.y ? std::log(w) : std::log1p(-w);
  }
  return 2.0 * acc;
}

FoldedStats FoldedLikelihood::stats(const Eigen::VectorXd& phi) const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  FoldedStats s;
  s.score = Eigen::VectorXd::Zero(dim);
  s.fisher = Eigen::MatrixXd::Zero(dim, dim);
  double acc = 0.0;
  for (const Dyad& d : dyads_) {
    const double w = clip(d.weight[0] * phi(d.idx[0]) + d.weight[1] * phi(d.idx[1]) +
                          d.weight[2] * phi(d.idx[2]) + d.weight[3] * phi(d.idx[3]));
    acc += d.y ? std::log(w) : std::log1p(-w);
    const double r = d.y ? 1.0 / w : -1.0 / (1.0 - w);
    const double c = 1.0 / (w * (1.0 - w));
    for (int a = 0; a < 4; ++a) {
      const auto ia = static_cast<Eigen::Index>(d.idx[a]);
      s.score(ia) += r * d.weight[a];
      const double ca = c * d.weight[a];
      for (int b = 0; b < 4; ++b) s.fisher(ia, static_cast<Eigen::Index>(d.idx[b])) += ca * d.weight[b];
    }
  }
  s.loglik = 2.0 * acc;
  s.score *= 2.0;
  s.fisher *= 2.0;
  return s;
}

// ---------------------------------------------------------------------------
// Constrained scoring

ScoringResult constrained_fisher_scoring(const FoldedLikelihood& lik, double lambda,
                                         const MStepConfig& config, const SplineGraphon& theta_init) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (theta_init.basis_size() != lik.basis_size()) throw UsageError("initial theta has the wrong basis size");
  const std::vector<double> folded = theta_init.folded();
  Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(folded.data(), static_cast<Eigen::Index>(folded.size()));
  if (phi.minCoeff() < -config.qp_tol || phi.maxCoeff() > 1.0 + config.qp_tol)
    throw UsageError("initial theta is infeasible");
  phi = phi.cwiseMax(0.0).cwiseMin(1.0);

  const Eigen::MatrixXd& P = lik.penalty();
  auto penalized = [&](const Eigen::VectorXd& p) { return lik.loglik(p) - 0.5 * lambda * p.dot(P * p); };

  ScoringResult out;
  double lp = penalized(phi);
  for (std::size_t it = 0; it < config.max_scoring_iters; ++it) {
    out.iterations = it + 1;
    const FoldedStats st = lik.stats(phi);
    const Eigen::VectorXd s_p = st.score - lambda * (P * phi);
    const Eigen::MatrixXd F_p = st.fisher + lambda * P;
    const Eigen::VectorXd lo = -phi;
    const Eigen::VectorXd hi = Eigen::VectorXd::Ones(phi.size()) - phi;
    BoxQpResult qp;
    try {
      qp = solve_box_qp(F_p, s_p, lo, hi, config.qp_tol);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << e.what() << " [lambda=" << lambda << ", scoring iteration " << it + 1 << "]";
      throw NumericalError(msg.str());
    }
    out.ridge_used = out.ridge_used || qp.ridge_used;
    if (qp.x.lpNorm<Eigen::Infinity>() < 1e-14) break;

    double t = 1.0;
    bool improved = false;
    Eigen::VectorXd candidate;
    double lp_candidate = lp;
    for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
      candidate = (phi + t * qp.x).cwiseMax(0.0).cwiseMin(1.0);
      lp_candidate = penalized(candidate);
      if (lp_candidate >= lp) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    const double rel = (lp_candidate - lp) / std::max(1.0, std::abs(lp));
    phi = candidate;
    lp = lp_candidate;
    if (rel < config.scoring_tol) break;
  }
  const std::vector<double> result(phi.data(), phi.data() + phi.size());
  out.graphon = SplineGraphon::from_folded(lik.basis_size(), result);
  out.penalized_loglik = lp;
  return out;
}

DfResult effective_df(const FoldedLikelihood& lik, const SplineGraphon& theta_hat, double lambda) {
  const std::vector<double> folded = theta_hat.folded();
  const Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(folded.data(), static_cast<Eigen::Index>(folded.size()));
  const Eigen::MatrixXd F = lik.fisher(phi);
  Eigen::MatrixXd F_p = F + lambda * lik.penalty();
  DfResult out{0.0, false};
  Eigen::LLT<Eigen::MatrixXd> llt(F_p);
  if (llt.info() != Eigen::Success) {
    F_p.diagonal().array() += 1e-8 * std::max(1e-300, F_p.diagonal().mean());
    llt.compute(F_p);
    out.ridge_used = true;
    if (llt.info() != Eigen::Success) throw NumericalError("effective df: penalized Fisher information is singular");
  }
  out.df = llt.solve(F).trace();
  return out;
}

double aicc(double loglik, double df, double n_dyads) {
  const double denom = n_dyads - df - 1.0;
  if (!(denom > 0.0)) throw ConfigError("AICc undefined: number of dyads must exceed df + 1");
  return -2.0 * loglik + 2.0 * df + 2.0 * df * (df + 1.0) / denom;
}

FitResult select_lambda(std::span<const Observation> obs, const MStepConfig& config,
                        const SplineGraphon* theta_init) {
  config.validate();
  const FoldedLikelihood lik(config.L, obs);
  SplineGraphon start = theta_init ? *theta_init : SplineGraphon::constant(config.L, lik.pooled_density());

  FitResult best;
  best.aicc = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const double lambda : config.lambda_grid) {
    const ScoringResult fit = constrained_fisher_scoring(lik, lambda, config, start);
    start = fit.graphon;
    const DfResult df = effective_df(lik, fit.graphon, lambda);
    const std::vector<double> folded = fit.graphon.folded();
    const double ll = lik.loglik(Eigen::Map<const Eigen::VectorXd>(folded.data(), static_cast<Eigen::Index>(folded.size())));
    double criterion;
    try {
      criterion = aicc(ll, df.df, lik.n_ordered_dyads());
    } catch (const ConfigError&) {
      continue;
    }
    if (!any || criterion < best.aicc) {
      best = {fit.graphon, lambda, ll, df.df, criterion, fit.ridge_used || df.ridge_used};
      any = true;
    }
  }
  if (!any) throw ConfigError("AICc undefined for every lambda: too few dyads for the basis size");
  return best;
}

}  // namespace gcmp
