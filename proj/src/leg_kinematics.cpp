#include "quadmpc/leg_kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace quadmpc {

double leg_side_sign(int leg) { return (leg == kFL || leg == kRL) ? 1.0 : -1.0; }

namespace {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

}  // namespace

Vec3 forward_kinematics(const LegGeometry& geom, double side, const Vec3& q) {
  const double s2 = std::sin(q(1)), c2 = std::cos(q(1));
  const double s23 = std::sin(q(1) + q(2)), c23 = std::cos(q(1) + q(2));
  const Vec3 in_plane(-geom.upper * s2 - geom.lower * s23, side * geom.abad_offset,
                      -geom.upper * c2 - geom.lower * c23);
  return rot_x(q(0)) * in_plane;
}

Mat3 leg_jacobian(const LegGeometry& geom, double side, const Vec3& q) {
  const double s2 = std::sin(q(1)), c2 = std::cos(q(1));
  const double s23 = std::sin(q(1) + q(2)), c23 = std::cos(q(1) + q(2));
  const Mat3 rx = rot_x(q(0));

  const Vec3 p = forward_kinematics(geom, side, q);
  Mat3 j;
  j.col(0) = Vec3(0.0, -p.z(), p.y());  // rotation about the x axis
  j.col(1) = rx * Vec3(-geom.upper * c2 - geom.lower * c23, 0.0,
                       geom.upper * s2 + geom.lower * s23);
  j.col(2) = rx * Vec3(-geom.lower * c23, 0.0, geom.lower * s23);
  return j;
}

Vec3 inverse_kinematics(const LegGeometry& geom, double side, const Vec3& p) {
  const double l1 = geom.abad_offset;
  const double l2 = geom.upper, l3 = geom.lower;

  // Abad roll: rotate (y, z) so the leg plane sits at lateral offset l1.
  const double rho_sq = p.y() * p.y() + p.z() * p.z();
  const double plane_z = -std::sqrt(std::max(rho_sq - l1 * l1, 1e-12));
  const double q1 = std::atan2(p.z(), p.y()) - std::atan2(plane_z, side * l1);

  // Two-link planar chain in the leg plane, measured from straight down.
  const double u = -p.x();
  const double w = -plane_z;
  double reach = std::hypot(u, w);
  const double reach_max = l2 + l3 - 1e-6;
  const double reach_min = std::abs(l2 - l3) + 1e-6;
  reach = std::clamp(reach, reach_min, reach_max);

  const double cos_knee =
      std::clamp((reach * reach - l2 * l2 - l3 * l3) / (2.0 * l2 * l3), -1.0, 1.0);
  double q3 = -std::acos(cos_knee);  // knee-back branch
  q3 = std::clamp(q3, geom.knee_min, geom.knee_max);

  const double q2 = std::atan2(u, w) -
                    std::atan2(l3 * std::sin(q3), l2 + l3 * std::cos(q3));

  double wrapped_q1 = q1;
  while (wrapped_q1 > M_PI) wrapped_q1 -= 2.0 * M_PI;
  while (wrapped_q1 < -M_PI) wrapped_q1 += 2.0 * M_PI;
  return {wrapped_q1, q2, q3};
}

namespace {

Mat3 checked_jacobian(const LegKinematics& kin) {
  const Mat3 j = leg_jacobian(kin.geom, kin.side, kin.q);
  const double det = j.determinant();
  if (std::abs(det) <= 1e-6) {
    throw std::domain_error("leg near kinematic singularity, |det J| = " +
                            std::to_string(std::abs(det)));
  }
  return j;
}

}  // namespace

Vec3 impedance_torques(const LegKinematics& kin, const Vec3& p_des,
                       const Vec3& v_des, const Vec3& kp, const Vec3& kd) {
  const Mat3 j = checked_jacobian(kin);
  const Vec3 p = forward_kinematics(kin.geom, kin.side, kin.q);
  const Vec3 force = kp.cwiseProduct(p_des - p) + kd.cwiseProduct(v_des - j * kin.qd);
  return j.transpose() * force;
}

Vec3 stance_torques(const LegKinematics& kin, const Mat3& body_rotation,
                    const Vec3& f_world) {
  const Mat3 j = checked_jacobian(kin);
  return j.transpose() * body_rotation.transpose() * f_world;
}

}  // namespace quadmpc
