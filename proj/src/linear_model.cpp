#include "quadmpc/linear_model.hpp"

#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace quadmpc {

LinearModel build_continuous(const BodyParams& params, double yaw,
                             const ContactSet& feet, const Vec3& com) {
  LinearModel m;
  m.yaw = yaw;
  for (int i = 0; i < kNumLegs; ++i) {
    if (feet.in_contact[i]) {
      m.legs.push_back(i);
      m.foot_offsets.push_back(feet.foot_positions[i] - com);
    }
  }
  if (m.legs.empty()) {
    throw std::invalid_argument("build_continuous: no legs in contact, model has no inputs");
  }

  const Mat3 rz = rot_z(yaw);
  // Euler rates at level attitude: omega = rot_z(yaw) * d(rpy)/dt, so the
  // coupling block is rot_z(yaw)^T.
  m.a_ct.block<3, 3>(0, 6) = rz.transpose();
  m.a_ct.block<3, 3>(3, 9) = Mat3::Identity();
  m.a_ct.block<3, 1>(9, 12) = -params.gravity;

  const Mat3 inertia_yaw = rz * params.inertia * rz.transpose();
  const Mat3 inertia_yaw_inv = inertia_yaw.inverse();
  m.b_ct = MatX::Zero(13, m.num_inputs());
  for (int k = 0; k < m.num_legs(); ++k) {
    m.b_ct.block<3, 3>(6, 3 * k) = inertia_yaw_inv * skew(m.foot_offsets[k]);
    m.b_ct.block<3, 3>(9, 3 * k) = Mat3::Identity() / params.mass;
  }
  return m;
}

LinearModel discretize(const LinearModel& model, double dt) {
  if (!(dt > 0.0) || dt > 0.1) {
    throw std::invalid_argument("discretize: dt must be in (0, 0.1] s");
  }
  const int nu = model.num_inputs();
  MatX block = MatX::Zero(13 + nu, 13 + nu);
  block.topLeftCorner<13, 13>() = model.a_ct;
  block.topRightCorner(13, nu) = model.b_ct;
  const MatX expm = (block * dt).exp();

  LinearModel out = model;
  out.a_dt = expm.topLeftCorner<13, 13>();
  out.b_dt = expm.topRightCorner(13, nu);
  out.dt = dt;
  return out;
}

}  // namespace quadmpc
