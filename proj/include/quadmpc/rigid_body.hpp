#pragma once

#include <array>

#include "quadmpc/geometry.hpp"

namespace quadmpc {

// Floating single-rigid-body model: the trunk carries all mass, legs are
// massless force applicators at point feet.
struct BodyParams {
  double mass = 9.0;                       // kg
  Mat3 inertia = (Mat3() << 0.07, 0, 0,    // kg m^2, body frame
                  0, 0.26, 0,
                  0, 0, 0.28).finished();
  // Stored as a positive magnitude and subtracted in the translational
  // dynamics.
  Vec3 gravity = {0.0, 0.0, 9.81};         // m/s^2
  // Abad pivot positions in the body frame, leg order FL FR RL RR.
  std::array<Vec3, kNumLegs> hip_offsets = {
      Vec3(0.19, 0.049, 0.0), Vec3(0.19, -0.049, 0.0),
      Vec3(-0.19, 0.049, 0.0), Vec3(-0.19, -0.049, 0.0)};

  // Throws std::invalid_argument on non-positive mass or a non-symmetric /
  // non-positive-definite inertia.
  void validate() const;
};

struct RobotState {
  Mat3 rotation = Mat3::Identity();  // world <- body
  Vec3 position = Vec3::Zero();      // m
  Vec3 angular_velocity = Vec3::Zero();  // rad/s, world frame
  Vec3 linear_velocity = Vec3::Zero();   // m/s

  double yaw() const { return yaw_of(rotation); }
  Vec3 euler() const { return euler_zyx(rotation); }  // (roll, pitch, yaw)
};

struct ContactSet {
  std::array<Vec3, kNumLegs> foot_positions{};  // world frame
  std::array<bool, kNumLegs> in_contact{};
  std::array<Vec3, kNumLegs> forces{};          // world frame, on the body

  // Throws if a leg not in contact carries a nonzero force.
  void validate() const;
};

struct StateDerivative {
  Vec3 velocity;              // d position
  Vec3 acceleration;          // d linear_velocity
  Mat3 rotation_dot;          // d rotation
  Vec3 angular_acceleration;  // d angular_velocity
};

// World-frame dynamics of the single rigid body under the contact forces.
// Lever arms are taken about the current CoM (foot position - position).
StateDerivative rigid_body_derivative(const RobotState& state,
                                      const BodyParams& params,
                                      const ContactSet& contacts);

// One fixed-contact integration step. Runge-Kutta 4 on position, velocity
// and angular velocity; the orientation advances through the rotation
// exponential with the commutator-corrected angular rate so the step stays
// fourth order on SO(3). The result is re-orthonormalized.
// Requires 0 < dt <= 0.01 s.
RobotState integrate_step(const RobotState& state, const BodyParams& params,
                          const ContactSet& contacts, double dt);

// Kinetic + potential energy with height measured from z = 0.
double mechanical_energy(const RobotState& state, const BodyParams& params);

// World-frame angular momentum I_w * omega.
Vec3 angular_momentum(const RobotState& state, const BodyParams& params);

}  // namespace quadmpc
