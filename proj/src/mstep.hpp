#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"

namespace gcmp {

// A network together with the node positions it is fitted at.
struct Observation {
  const Graph* graph;
  const NodePositions* positions;
};

struct MStepConfig {
  std::size_t L = 8;
  std::vector<double> lambda_grid;
  std::size_t max_scoring_iters = 100;
  double scoring_tol = 1e-9;  // relative penalized log-likelihood change
  double qp_tol = 1e-9;

  void validate() const;
};

// L = clamp(floor(sqrt(n_min)), 8, 25); 25 log-spaced penalties in [1e-2, 1e6].
std::size_t default_basis_size(std::size_t n_min);
std::vector<double> default_lambda_grid();
MStepConfig default_mstep_config(std::size_t n_min);

struct FitResult {
  SplineGraphon graphon;
  double lambda = 0.0;
  double loglik = 0.0;  // unpenalized, at the fitted theta
  double df = 0.0;
  double aicc = 0.0;
  bool ridge_used = false;
};

// ---- Full-parameter quantities (theta has L*L entries, row-major). These sum
// over ordered pairs i != j and accept non-symmetric theta.

double log_likelihood(std::span<const double> theta, std::span<const Observation> obs);
Eigen::VectorXd score(std::span<const double> theta, std::span<const Observation> obs);
Eigen::MatrixXd fisher_info(std::span<const double> theta, std::span<const Observation> obs);

// (J (x) I)'(J (x) I) + (I (x) J)'(I (x) J) with J the (L-1) x L first-difference matrix.
Eigen::MatrixXd penalty_matrix(std::size_t L);

struct PenalizedQuantities {
  double loglik;
  Eigen::VectorXd score;
  Eigen::MatrixXd fisher;
};

PenalizedQuantities penalized_quantities(std::span<const double> theta, double lambda,
                                         std::span<const Observation> obs);

// ---- Folded (symmetric) parameterization used by the optimizer.

// Expansion matrix E with theta_full = E * theta_folded.
Eigen::MatrixXd expansion_matrix(std::size_t L);

struct FoldedStats {
  double loglik = 0.0;
  Eigen::VectorXd score;
  Eigen::MatrixXd fisher;
};

// Log-likelihood, score and Fisher information with respect to the folded
// parameters. Equal to (l, E's, E'FE) of the full-parameter versions.
class FoldedLikelihood {
 public:
  FoldedLikelihood(std::size_t L, std::span<const Observation> obs);

  std::size_t basis_size() const { return L_; }
  std::size_t dimension() const { return folded_size(L_); }
  double n_ordered_dyads() const { return n_ordered_dyads_; }
  double pooled_density() const { return pooled_density_; }
  const Eigen::MatrixXd& penalty() const { return penalty_; }

  double loglik(const Eigen::VectorXd& phi) const;
  FoldedStats stats(const Eigen::VectorXd& phi) const;
  Eigen::MatrixXd fisher(const Eigen::VectorXd& phi) const { return stats(phi).fisher; }

 private:
  struct Dyad {
    std::size_t idx[4];
    double weight[4];
    bool y;
  };
  std::size_t L_;
  std::vector<Dyad> dyads_;
  double n_ordered_dyads_ = 0.0;
  double pooled_density_ = 0.0;
  Eigen::MatrixXd penalty_;
};

struct ScoringResult {
  SplineGraphon graphon;
  double penalized_loglik = 0.0;
  std::size_t iterations = 0;
  bool ridge_used = false;
};

ScoringResult constrained_fisher_scoring(const FoldedLikelihood& lik, double lambda,
                                         const MStepConfig& config, const SplineGraphon& theta_init);

struct DfResult {
  double df;
  bool ridge_used;
};

// tr(F_p^{-1} F) at the fitted parameters, on the folded parameterization.
DfResult effective_df(const FoldedLikelihood& lik, const SplineGraphon& theta_hat, double lambda);

double aicc(double loglik, double df, double n_dyads);

// Fits every penalty in the grid (ascending, warm-started) and returns the
// AICc minimizer; ties go to the smaller penalty. Without theta_init the
// first fit starts from the constant pooled density.
FitResult select_lambda(std::span<const Observation> obs, const MStepConfig& config,
                        const SplineGraphon* theta_init = nullptr);

}  // namespace gcmp
