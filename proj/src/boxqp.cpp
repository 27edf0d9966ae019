#include "boxqp.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace gcmp {

namespace {

enum class Bound : signed char { Free = 0, Lower = -1, Upper = 1 };

}  // namespace

BoxQpResult solve_box_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol) {
  const Eigen::Index n = g.size();
  if (H.rows() != n || H.cols() != n || lo.size() != n || hi.size() != n)
    throw UsageError("box QP dimension mismatch");

  BoxQpResult out;
  out.x = Eigen::VectorXd::Zero(n).cwiseMax(lo).cwiseMin(hi);
  std::vector<Bound> state(static_cast<std::size_t>(n), Bound::Free);
  const double ridge = 1e-8 * std::max(1e-300, H.diagonal().mean());

  const int max_iter = 10 * static_cast<int>(n) + 100;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (state[static_cast<std::size_t>(i)] == Bound::Free) free.push_back(i);

    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd Hff(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        rhs(a) = g(free[a]) - H.row(free[a]).dot(out.x) + H.row(free[a])(free).dot(out.x(free));
        for (Eigen::Index b = 0; b < nf; ++b) Hff(a, b) = H(free[a], free[b]);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(Hff);
      if (llt.info() != Eigen::Success) {
        Hff.diagonal().array() += ridge;
        llt.compute(Hff);
        out.ridge_used = true;
        if (llt.info() != Eigen::Success) {
          std::ostringstream msg;
          msg << "box QP: curvature not positive definite after ridge (free=" << nf
              << ", mean diag=" << H.diagonal().mean() << ")";
          throw NumericalError(msg.str());
        }
      }
      const Eigen::VectorXd target = llt.solve(rhs);
      const Eigen::VectorXd step = target - out.x(free);

      double alpha = 1.0;
      Eigen::Index blocking = -1;
      Bound blocking_side = Bound::Free;
      for (Eigen::Index a = 0; a < nf; ++a) {
        const Eigen::Index i = free[a];
        double reach = alpha;
        if (step(a) < 0.0) reach = (lo(i) - out.x(i)) / step(a);
        else if (step(a) > 0.0) reach = (hi(i) - out.x(i)) / step(a);
        if (reach < alpha) {
          alpha = std::max(0.0, reach);
          blocking = i;
          blocking_side = step(a) < 0.0 ? Bound::Lower : Bound::Upper;
        }
      }
      for (Eigen::Index a = 0; a < nf; ++a) out.x(free[a]) += alpha * step(a);
      if (blocking >= 0) {
        out.x(blocking) = blocking_side == Bound::Lower ? lo(blocking) : hi(blocking);
        state[static_cast<std::size_t>(blocking)] = blocking_side;
        continue;
      }
    }

    // Full step taken: release the bound with the worst multiplier sign.
    const Eigen::VectorXd grad = H * out.x - g;
    Eigen::Index worst = -1;
    double worst_violation = tol * (1.0 + g.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Bound s = state[static_cast<std::size_t>(i)];
      const double violation = s == Bound::Lower ? -grad(i) : s == Bound::Upper ? grad(i) : 0.0;
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = i;
      }
    }
    if (worst < 0) return out;
    state[static_cast<std::size_t>(worst)] = Bound::Free;
  }
  throw NumericalError("box QP: active-set iteration limit reached");
}

}  // namespace gcmp
