#pragma once

#include <vector>

#include "quadmpc/rigid_body.hpp"

namespace quadmpc {

// Yaw-parameterized linear model of the single rigid body about level
// attitude, with a constant 13th state carrying gravity so the model stays
// homogeneous. State ordering:
//   [ euler(3) | position(3) | angular_velocity(3) | linear_velocity(3) | 1 ]
struct LinearModel {
  Eigen::Matrix<double, 13, 13> a_ct = Eigen::Matrix<double, 13, 13>::Zero();
  MatX b_ct;  // 13 x 3n
  Eigen::Matrix<double, 13, 13> a_dt = Eigen::Matrix<double, 13, 13>::Zero();
  MatX b_dt;  // 13 x 3n, empty until discretize()
  double dt = 0.0;  // 0 until discretized
  double yaw = 0.0;
  std::vector<int> legs;              // legs whose forces are model inputs
  std::vector<Vec3> foot_offsets;     // lever arms used, world frame

  int num_legs() const { return static_cast<int>(legs.size()); }
  int num_inputs() const { return 3 * num_legs(); }
  bool discrete() const { return dt > 0.0; }
};

// Builds the continuous-time model at the given yaw. Legs flagged in_contact
// contribute force-input columns with lever arms foot_position - com.
// Throws if no leg is in contact.
LinearModel build_continuous(const BodyParams& params, double yaw,
                             const ContactSet& feet, const Vec3& com);

// Exact zero-order-hold discretization via one matrix exponential of the
// augmented [[A, B], [0, 0]] block. Requires 0 < dt <= 0.1 s.
LinearModel discretize(const LinearModel& model, double dt);

}  // namespace quadmpc
