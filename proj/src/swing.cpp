#include "quadmpc/swing.hpp"

#include <cmath>
#include <stdexcept>

namespace quadmpc {

Vec3 raibert_foot_placement(const Eigen::Vector2d& vel,
                            const Eigen::Vector2d& vel_ref, double stance_time,
                            double gain, const Vec3& hip_world,
                            double ground_height, double max_step) {
  Eigen::Vector2d step = vel * stance_time / 2.0 + gain * (vel - vel_ref);
  const double len = step.norm();
  if (len > max_step) step *= max_step / len;
  return {hip_world.x() + step.x(), hip_world.y() + step.y(), ground_height};
}

namespace {

// Hermite form of a cubic Bezier with doubled endpoints: value, then
// d/ds and d2/ds2.
double smooth(double a, double b, double s) { return a + (b - a) * s * s * (3.0 - 2.0 * s); }
double smooth_d(double a, double b, double s) { return (b - a) * 6.0 * s * (1.0 - s); }
double smooth_dd(double a, double b, double s) { return (b - a) * 6.0 * (1.0 - 2.0 * s); }

}  // namespace

SwingTrajectory::SwingTrajectory(const Vec3& start, const Vec3& foothold,
                                 double apex_height, double ground_height)
    : start_(start), end_(foothold), apex_z_(ground_height + apex_height) {}

SwingSample SwingTrajectory::eval(double s, double duration) const {
  if (s < 0.0 || s > 1.0) {
    throw std::domain_error("swing phase outside [0, 1]");
  }

  SwingSample out;
  for (int axis = 0; axis < 2; ++axis) {
    out.position(axis) = smooth(start_(axis), end_(axis), s);
    out.velocity(axis) = smooth_d(start_(axis), end_(axis), s);
    out.acceleration(axis) = smooth_dd(start_(axis), end_(axis), s);
  }

  // Two arcs through the apex; both have zero vertical rate at the junction.
  if (s < 0.5) {
    const double u = 2.0 * s;
    out.position.z() = smooth(start_.z(), apex_z_, u);
    out.velocity.z() = smooth_d(start_.z(), apex_z_, u) * 2.0;
    out.acceleration.z() = smooth_dd(start_.z(), apex_z_, u) * 4.0;
  } else {
    const double u = 2.0 * s - 1.0;
    out.position.z() = smooth(apex_z_, end_.z(), u);
    out.velocity.z() = smooth_d(apex_z_, end_.z(), u) * 2.0;
    out.acceleration.z() = smooth_dd(apex_z_, end_.z(), u) * 4.0;
  }

  if (duration > 0.0) {
    out.velocity /= duration;
    out.acceleration /= duration * duration;
  }
  return out;
}

}  // namespace quadmpc
