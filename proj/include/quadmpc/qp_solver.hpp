#pragma once

#include <Eigen/Dense>

#include "quadmpc/geometry.hpp"

namespace quadmpc {

// minimize 1/2 U^T H U + U^T g  subject to  l <= C U <= u
struct QpProblem {
  MatX h;
  VecX g;
  MatX c;
  VecX lower;
  VecX upper;

  int num_vars() const { return static_cast<int>(g.size()); }
  int num_constraints() const { return static_cast<int>(lower.size()); }
};

enum class QpStatus { kSolved, kMaxIters, kPrimalInfeasible };

struct QpSolution {
  VecX u;
  VecX multipliers;
  double objective = 0.0;
  int iterations = 0;
  QpStatus status = QpStatus::kMaxIters;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Operator-splitting solver with a cached factorization. An instance owns its
// cache and is meant to be reused across consecutive solves of same-shaped
// problems; it is not re-entrant.
class QpSolver {
 public:
  QpSolution solve(const QpProblem& problem, const VecX* warm_start = nullptr,
                   double tol = 1e-6, int max_iters = 10000);

 private:
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  bool refresh_factorization(const QpProblem& problem);

  MatX h_cache_;  // change detection only; kernels read the row-major copies
  MatX c_cache_;
  RowMat h_;
  RowMat c_;
  double rho_ = 0.0;
  Eigen::LLT<MatX> llt_;
  bool have_factorization_ = false;

  // carried between solves for warm starting the splitting variables
  VecX cached_z_;
  VecX cached_y_;
};

}  // namespace quadmpc
