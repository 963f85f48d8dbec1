#pragma once

#include <Eigen/Dense>

namespace quadmpc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec13 = Eigen::Matrix<double, 13, 1>;

inline constexpr int kNumLegs = 4;

// Leg order used everywhere: front-left, front-right, rear-left, rear-right.
enum LegIndex { kFL = 0, kFR = 1, kRL = 2, kRR = 3 };

// [v]x such that skew(v) * y == v.cross(y).
Mat3 skew(const Vec3& v);

// Rotation about world z by yaw.
Mat3 rot_z(double yaw);

// Rotation exponential map, exp([w]x). Series expansion below 1e-8 rad.
Mat3 exp_so3(const Vec3& w);

// Nearest rotation matrix to r (Newton iteration on the polar factor).
Mat3 orthonormalized(const Mat3& r);

// ZYX convention: r == rot_z(yaw) * rot_y(pitch) * rot_x(roll).
// Returns (roll, pitch, yaw).
Vec3 euler_zyx(const Mat3& r);
Mat3 rot_from_euler_zyx(const Vec3& rpy);
double yaw_of(const Mat3& r);

}  // namespace quadmpc
