#include "quadmpc/mpc_builder.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace quadmpc {

namespace {

void warn(const char* msg) {
  const char* lvl = std::getenv("QUADMPC_LOG");
  if (lvl != nullptr && (std::strcmp(lvl, "quiet") == 0 || std::strcmp(lvl, "off") == 0)) {
    return;
  }
  std::fprintf(stderr, "[quadmpc] warning: %s\n", msg);
}

}  // namespace

void MpcConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("mpc: horizon must be >= 1");
  if (!(dt_mpc > 0.0)) throw std::invalid_argument("mpc: dt_mpc must be positive");
  if ((q_weights.array() < 0.0).any() || (r_weights.array() < 0.0).any()) {
    throw std::invalid_argument("mpc: weights must be non-negative");
  }
  if (q_weights.maxCoeff() <= 0.0 && r_weights.maxCoeff() <= 0.0) {
    throw std::invalid_argument("mpc: at least one weight must be positive");
  }
  if (!(f_min >= 0.0) || !(f_min < u_max)) {
    throw std::invalid_argument("mpc: need 0 <= f_min < u_max");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("mpc: mu must be positive");
}

void ReferenceTrajectory::validate(int horizon) const {
  if (static_cast<int>(states.size()) != horizon) {
    throw std::invalid_argument("mpc: reference length does not match horizon");
  }
  for (const Vec13& x : states) {
    if (x(12) != 1.0) {
      throw std::invalid_argument("mpc: reference gravity coordinate must be 1");
    }
  }
}

FrictionBlock friction_rows(double mu, double f_min, double u_max) {
  if (!(mu > 0.0)) throw std::invalid_argument("mpc: mu must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  FrictionBlock b;
  b.rows << 0.0, 0.0, 1.0,   // f_z
      1.0, 0.0, mu,          // f_x + mu f_z >= 0
      1.0, 0.0, -mu,         // f_x - mu f_z <= 0
      0.0, 1.0, mu,
      0.0, 1.0, -mu;
  b.lower << f_min, 0.0, -inf, 0.0, -inf;
  b.upper << u_max, inf, 0.0, inf, 0.0;
  return b;
}

QpProblem build_mpc(const LinearModel& model, const ContactTable& schedule,
                    const ReferenceTrajectory& ref, const MpcConfig& cfg,
                    const Vec13& x0) {
  cfg.validate();
  const int horizon = cfg.horizon;
  ref.validate(horizon);
  if (!model.discrete() || std::abs(model.dt - cfg.dt_mpc) > 1e-12) {
    throw std::invalid_argument("mpc: model must be discretized at dt_mpc");
  }
  if (model.num_legs() != kNumLegs) {
    throw std::invalid_argument("mpc: model must carry all four leg inputs");
  }
  if (static_cast<int>(schedule.size()) != horizon) {
    throw std::invalid_argument("mpc: contact schedule does not cover horizon");
  }

  const int nu = model.num_inputs();
  const int nv = nu * horizon;

  // x(k) = A^k x0 + sum_j A^(k-1-j) B u(j), stacked over k = 1..N
  std::vector<Eigen::Matrix<double, 13, 13>> apow(horizon + 1);
  apow[0].setIdentity();
  for (int k = 1; k <= horizon; ++k) apow[k] = model.a_dt * apow[k - 1];

  MatX aqp(13 * horizon, 13);
  MatX bqp = MatX::Zero(13 * horizon, nv);
  for (int k = 0; k < horizon; ++k) {
    aqp.middleRows<13>(13 * k) = apow[k + 1];
    for (int j = 0; j <= k; ++j) {
      bqp.block(13 * k, nu * j, 13, nu) = apow[k - j] * model.b_dt;
    }
  }

  VecX qbar(13 * horizon);
  VecX xref(13 * horizon);
  for (int k = 0; k < horizon; ++k) {
    qbar.segment<13>(13 * k) = cfg.q_weights;
    xref.segment<13>(13 * k) = ref.states[k];
  }
  VecX rbar(nv);
  for (int leg_block = 0; leg_block < nv / 3; ++leg_block) {
    rbar.segment<3>(3 * leg_block) = cfg.r_weights;
  }

  QpProblem qp;
  const MatX qb = qbar.asDiagonal() * bqp;
  qp.h = 2.0 * (bqp.transpose() * qb);
  qp.h.diagonal() += 2.0 * rbar;
  qp.h = ((qp.h + qp.h.transpose()) * 0.5).eval();
  qp.g = 2.0 * (qb.transpose() * (aqp * x0 - xref));

  int rows = 0;
  for (int k = 0; k < horizon; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) rows += schedule[k][leg] ? 5 : 3;
  }
  int bound_rows = 0;
  if (cfg.state_bounds) {
    for (int i = 0; i < 12; ++i) {
      if (std::isfinite(cfg.x_max(i))) ++bound_rows;
    }
    rows += bound_rows * horizon;
  }

  qp.c = MatX::Zero(rows, nv);
  qp.lower = VecX::Zero(rows);
  qp.upper = VecX::Zero(rows);

  const FrictionBlock pyramid = friction_rows(cfg.mu, cfg.f_min, cfg.u_max);
  int row = 0;
  for (int k = 0; k < horizon; ++k) {
    int stance_count = 0;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const int col = nu * k + 3 * leg;
      if (schedule[k][leg]) {
        ++stance_count;
        qp.c.block<5, 3>(row, col) = pyramid.rows;
        qp.lower.segment<5>(row) = pyramid.lower;
        qp.upper.segment<5>(row) = pyramid.upper;
        row += 5;
      } else {
        qp.c.block<3, 3>(row, col).setIdentity();
        row += 3;  // bounds stay 0 = 0: swing legs push nothing
      }
    }
    if (stance_count == 0 && ref.states[k].head<12>().cwiseAbs().maxCoeff() > 0.0) {
      warn("mpc horizon step has no stance legs; reference is untrackable there");
    }
  }

  if (cfg.state_bounds) {
    const VecX bias = aqp * x0;
    for (int k = 0; k < horizon; ++k) {
      for (int i = 0; i < 12; ++i) {
        if (!std::isfinite(cfg.x_max(i))) continue;
        qp.c.row(row) = bqp.row(13 * k + i);
        qp.lower(row) = -cfg.x_max(i) - bias(13 * k + i);
        qp.upper(row) = cfg.x_max(i) - bias(13 * k + i);
        ++row;
      }
    }
  }

  return qp;
}

}  // namespace quadmpc
