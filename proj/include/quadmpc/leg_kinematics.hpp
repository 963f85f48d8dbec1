#pragma once

#include "quadmpc/geometry.hpp"

namespace quadmpc {

// 3-DoF serial leg: abad roll about x, hip pitch about y, knee pitch about y.
// The hip frame sits at the abad pivot with body-aligned axes (x forward,
// y left, z up). q = 0 is the reference pose: leg straight down, foot at
// (0, side * abad_offset, -(upper + lower)).
struct LegGeometry {
  double abad_offset = 0.062;  // m, lateral offset of the leg plane
  double upper = 0.209;        // m
  double lower = 0.195;        // m
  // Knee travel for the knee-back branch used by the inverse kinematics.
  double knee_min = -2.7;      // rad
  double knee_max = -0.05;     // rad
};

// +1 for left legs (FL, RL), -1 for right legs (FR, RR).
double leg_side_sign(int leg);

struct LegKinematics {
  LegGeometry geom;
  double side = 1.0;           // leg_side_sign of the leg this instance serves
  Vec3 q = Vec3::Zero();       // (abad, hip, knee), rad
  Vec3 qd = Vec3::Zero();      // rad/s
};

// Foot position in the hip frame.
Vec3 forward_kinematics(const LegGeometry& geom, double side, const Vec3& q);

// Analytic 3x3 Jacobian d(foot)/d(q).
Mat3 leg_jacobian(const LegGeometry& geom, double side, const Vec3& q);

// Closed-form inverse kinematics on the knee-back branch. Targets outside
// the workspace are clamped to the nearest reachable point; the knee obeys
// [knee_min, knee_max].
Vec3 inverse_kinematics(const LegGeometry& geom, double side, const Vec3& p);

// Cartesian PD in the hip frame mapped through the Jacobian transpose:
// tau = J^T (Kp (p_des - p) + Kd (v_des - J qd)).
// Throws std::domain_error near singularity (|det J| <= 1e-6).
Vec3 impedance_torques(const LegKinematics& kin, const Vec3& p_des,
                       const Vec3& v_des, const Vec3& kp, const Vec3& kd);

// Stance torque map tau = J^T R^T f with f the world-frame ground reaction
// force on the body and R the body rotation.
Vec3 stance_torques(const LegKinematics& kin, const Mat3& body_rotation,
                    const Vec3& f_world);

}  // namespace quadmpc
