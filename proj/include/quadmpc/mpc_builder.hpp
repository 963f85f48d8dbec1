#pragma once

#include <limits>
#include <vector>

#include "quadmpc/gait.hpp"
#include "quadmpc/linear_model.hpp"
#include "quadmpc/qp_solver.hpp"

namespace quadmpc {

struct MpcConfig {
  int horizon = 10;
  double dt_mpc = 0.025;
  // state weight order: euler(3), position(3), angular vel(3), linear vel(3), 1
  Vec13 q_weights = (Vec13() << 1.0, 1.5, 25.0, 5.0, 5.0, 80.0, 0.05, 0.05,
                     0.5, 1.0, 1.0, 0.5, 0.0)
                        .finished();
  Vec3 r_weights = Vec3::Constant(1e-6);
  double u_max = 160.0;  // vertical force cap per leg, N
  double f_min = 2.0;    // vertical force floor for stance legs, N
  double mu = 0.5;
  // Optional symmetric state-magnitude rows; off by default, entries with
  // infinite bound are skipped. Last (constant) state never gets a row.
  bool state_bounds = false;
  Vec13 x_max = Vec13::Constant(std::numeric_limits<double>::infinity());

  void validate() const;  // throws std::invalid_argument
};

// Desired states for horizon steps 1..N; the trailing entry of every state
// must stay 1 to match the gravity-carrying coordinate.
struct ReferenceTrajectory {
  std::vector<Vec13> states;

  void validate(int horizon) const;  // throws std::invalid_argument
};

struct FrictionBlock {
  Eigen::Matrix<double, 5, 3> rows;
  Eigen::Matrix<double, 5, 1> lower;
  Eigen::Matrix<double, 5, 1> upper;
};

// Two-sided bound rows keeping one leg's force inside the 4-face pyramid:
// f_min <= f_z <= u_max and |f_x|, |f_y| <= mu f_z.
FrictionBlock friction_rows(double mu, double f_min, double u_max);

// Condenses the finite-horizon tracking problem over the contact schedule
// into a dense box-constrained QP in the stacked forces U.
QpProblem build_mpc(const LinearModel& model, const ContactTable& schedule,
                    const ReferenceTrajectory& ref, const MpcConfig& cfg,
                    const Vec13& x0);

}  // namespace quadmpc
