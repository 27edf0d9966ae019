#pragma once

#include <Eigen/Dense>

namespace gcmp {

struct BoxQpResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool ridge_used = false;
};

// Primal active-set solver for
//   minimize 1/2 x'Hx - g'x   subject to   lo <= x <= hi
// with H symmetric positive (semi)definite and lo <= 0 <= hi. A ridge of
// 1e-8 * mean(diag H) is added when the free block is not numerically
// positive definite. Throws NumericalError if that still fails or the
// iteration cap is reached.
BoxQpResult solve_box_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol);

}  // namespace gcmp
