#include "quadmpc/qp_solver.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "quadmpc/kernels.hpp"

namespace quadmpc {

namespace {
constexpr double kRegularization = 1e-9;
constexpr double kOverRelax = 1.6;
constexpr int kStallWindow = 1000;
}  // namespace

bool QpSolver::refresh_factorization(const QpProblem& problem) {
  const int n = problem.num_vars();
  const int m = problem.num_constraints();
  const bool same_shape =
      have_factorization_ && h_cache_.rows() == n && c_cache_.rows() == m;
  if (same_shape &&
      std::memcmp(h_cache_.data(), problem.h.data(), sizeof(double) * n * n) == 0 &&
      (m == 0 || std::memcmp(c_cache_.data(), problem.c.data(),
                             sizeof(double) * m * n) == 0)) {
    return false;
  }

  h_cache_ = problem.h;
  c_cache_ = problem.c;
  h_ = problem.h;
  c_ = problem.c;
  rho_ = 0.1 * problem.h.trace() / n;
  if (!(rho_ > 1e-12)) rho_ = 1e-6;

  MatX kkt = problem.h + rho_ * problem.c.transpose() * problem.c;
  kkt.diagonal().array() += kRegularization;
  llt_.compute(kkt);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("qp factorization failed");
  }
  have_factorization_ = true;
  cached_z_.resize(0);
  cached_y_.resize(0);
  return true;
}

QpSolution QpSolver::solve(const QpProblem& problem, const VecX* warm_start,
                           double tol, int max_iters) {
  const int n = problem.num_vars();
  const int m = problem.num_constraints();
  if (n == 0 || problem.h.rows() != n || problem.h.cols() != n) {
    throw std::invalid_argument("qp: bad Hessian dimensions");
  }
  if (problem.c.rows() != m || (m > 0 && problem.c.cols() != n) ||
      problem.upper.size() != m) {
    throw std::invalid_argument("qp: bad constraint dimensions");
  }
  if ((problem.h - problem.h.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("qp: Hessian not symmetric");
  }
  if (m > 0 && (problem.lower - problem.upper).maxCoeff() > 0.0) {
    throw std::invalid_argument("qp: lower bound exceeds upper bound");
  }
  if (warm_start != nullptr && warm_start->size() != n) {
    throw std::invalid_argument("qp: warm start has wrong size");
  }

  refresh_factorization(problem);

  VecX u = VecX::Zero(n);
  VecX z = VecX::Zero(m);
  VecX y = VecX::Zero(m);
  if (warm_start != nullptr) {
    u = *warm_start;
    if (cached_z_.size() == m) {
      z = cached_z_;
      y = cached_y_;
    } else if (m > 0) {
      VecX cu(m);
      kern::matvec(c_.data(), m, n, u.data(), cu.data());
      kern::clamp(cu.data(), problem.lower.data(), problem.upper.data(),
                  z.data(), m);
    }
  } else if (m > 0) {
    kern::clamp(z.data(), problem.lower.data(), problem.upper.data(), z.data(),
                m);
  }

  VecX rhs(n), cu(m), zhat(m), cty(n), stat(n), t(m), v(m), pr(m);

  QpSolution best;
  best.u = u;
  best.multipliers = y;
  double best_score = std::numeric_limits<double>::infinity();

  double window_rp = std::numeric_limits<double>::infinity();
  double window_ynorm = 0.0;
  QpStatus status = QpStatus::kMaxIters;
  int iter = 0;

  while (iter < max_iters) {
    ++iter;

    // u <- argmin of the augmented Lagrangian
    if (m > 0) {
      t = rho_ * z - y;
      kern::matvec_t(c_.data(), m, n, t.data(), rhs.data());
    } else {
      rhs.setZero();
    }
    kern::axpy(-1.0, problem.g.data(), rhs.data(), n);
    u = llt_.solve(rhs);

    double rp = 0.0;
    if (m > 0) {
      kern::matvec(c_.data(), m, n, u.data(), cu.data());
      zhat = kOverRelax * cu + (1.0 - kOverRelax) * z;
      v = zhat + y / rho_;
      kern::clamp(v.data(), problem.lower.data(), problem.upper.data(),
                  z.data(), m);
      y += rho_ * (zhat - z);
      pr = cu - z;
      rp = kern::norm_inf(pr.data(), m);
    }

    kern::matvec(h_.data(), n, n, u.data(), stat.data());
    kern::axpy(1.0, problem.g.data(), stat.data(), n);
    if (m > 0) {
      kern::matvec_t(c_.data(), m, n, y.data(), cty.data());
      kern::axpy(1.0, cty.data(), stat.data(), n);
    }
    const double rd = kern::norm_inf(stat.data(), n);

    const double score = std::max(rp, rd);
    if (score < best_score) {
      best_score = score;
      best.u = u;
      best.multipliers = y;
      best.primal_residual = rp;
      best.dual_residual = rd;
      best.iterations = iter;
    }
    if (score < tol) {
      status = QpStatus::kSolved;
      break;
    }

    if (iter % kStallWindow == 0) {
      const double ynorm = m > 0 ? kern::norm_inf(y.data(), m) : 0.0;
      const bool stalled = rp > std::max(tol, 1e-10) && rp > 0.99 * window_rp;
      // On infeasible problems the multipliers grow without bound while the
      // primal residual plateaus at the infeasibility gap.
      const bool diverging = ynorm > 1.2 * window_ynorm + 1e-6;
      if (stalled && diverging && window_rp < std::numeric_limits<double>::infinity()) {
        status = QpStatus::kPrimalInfeasible;
        break;
      }
      window_rp = rp;
      window_ynorm = ynorm;
    }
  }

  cached_z_ = z;
  cached_y_ = y;

  QpSolution out = best;
  out.status = status;
  out.iterations = iter;
  if (status == QpStatus::kSolved) {
    out.u = u;
    out.multipliers = y;
    double rp = 0.0;
    if (m > 0) {
      kern::matvec(c_.data(), m, n, u.data(), cu.data());
      pr = cu - z;
      rp = kern::norm_inf(pr.data(), m);
    }
    out.primal_residual = rp;
    kern::matvec(h_.data(), n, n, u.data(), stat.data());
    kern::axpy(1.0, problem.g.data(), stat.data(), n);
    if (m > 0) {
      kern::matvec_t(c_.data(), m, n, y.data(), cty.data());
      kern::axpy(1.0, cty.data(), stat.data(), n);
    }
    out.dual_residual = kern::norm_inf(stat.data(), n);
  }
  out.objective = 0.5 * out.u.dot(problem.h * out.u) + out.u.dot(problem.g);
  return out;
}

}  // namespace quadmpc
