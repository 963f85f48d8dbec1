#include "quadmpc/rigid_body.hpp"

#include <stdexcept>

namespace quadmpc {

void BodyParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("BodyParams: mass must be positive");
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("BodyParams: inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("BodyParams: inertia must be positive definite");
  }
}

void ContactSet::validate() const {
  for (int i = 0; i < kNumLegs; ++i) {
    if (!in_contact[i] && forces[i].squaredNorm() != 0.0) {
      throw std::invalid_argument("ContactSet: non-contact leg carries force");
    }
  }
}

StateDerivative rigid_body_derivative(const RobotState& state,
                                      const BodyParams& params,
                                      const ContactSet& contacts) {
  Vec3 force_sum = Vec3::Zero();
  Vec3 torque_sum = Vec3::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    if (!contacts.in_contact[i]) continue;
    force_sum += contacts.forces[i];
    torque_sum += (contacts.foot_positions[i] - state.position).cross(contacts.forces[i]);
  }

  const Mat3 inertia_world =
      state.rotation * params.inertia * state.rotation.transpose();
  const Vec3& w = state.angular_velocity;

  StateDerivative d;
  d.velocity = state.linear_velocity;
  d.acceleration = force_sum / params.mass - params.gravity;
  d.rotation_dot = skew(w) * state.rotation;
  d.angular_acceleration =
      inertia_world.ldlt().solve(torque_sum - w.cross(inertia_world * w));
  return d;
}

namespace {

// dexp^-1(theta) omega truncated at the second commutator, enough for a
// fourth-order Munthe-Kaas step.
Vec3 dexpinv(const Vec3& theta, const Vec3& omega) {
  const Vec3 c1 = theta.cross(omega);
  return omega - 0.5 * c1 + theta.cross(c1) / 12.0;
}

struct Stage {
  Vec3 dp, dv, dtheta, dw;
};

Stage eval_stage(const RobotState& base, const BodyParams& params,
                 const ContactSet& contacts, const Vec3& p, const Vec3& v,
                 const Vec3& theta, const Vec3& w) {
  RobotState s;
  s.rotation = exp_so3(theta) * base.rotation;
  s.position = p;
  s.linear_velocity = v;
  s.angular_velocity = w;
  const StateDerivative d = rigid_body_derivative(s, params, contacts);
  return {v, d.acceleration, dexpinv(theta, w), d.angular_acceleration};
}

}  // namespace

RobotState integrate_step(const RobotState& state, const BodyParams& params,
                          const ContactSet& contacts, double dt) {
  if (!(dt > 0.0) || dt > 0.01) {
    throw std::invalid_argument("integrate_step: dt must be in (0, 0.01] s");
  }

  const Vec3 p0 = state.position;
  const Vec3 v0 = state.linear_velocity;
  const Vec3 w0 = state.angular_velocity;
  const Vec3 t0 = Vec3::Zero();  // incremental rotation vector

  const Stage k1 = eval_stage(state, params, contacts, p0, v0, t0, w0);
  const Stage k2 = eval_stage(state, params, contacts,
                              p0 + 0.5 * dt * k1.dp, v0 + 0.5 * dt * k1.dv,
                              t0 + 0.5 * dt * k1.dtheta, w0 + 0.5 * dt * k1.dw);
  const Stage k3 = eval_stage(state, params, contacts,
                              p0 + 0.5 * dt * k2.dp, v0 + 0.5 * dt * k2.dv,
                              t0 + 0.5 * dt * k2.dtheta, w0 + 0.5 * dt * k2.dw);
  const Stage k4 = eval_stage(state, params, contacts, p0 + dt * k3.dp,
                              v0 + dt * k3.dv, t0 + dt * k3.dtheta,
                              w0 + dt * k3.dw);

  RobotState out;
  out.position = p0 + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  out.linear_velocity = v0 + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  out.angular_velocity = w0 + dt / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  const Vec3 theta =
      dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta);
  out.rotation = orthonormalized(exp_so3(theta) * state.rotation);
  return out;
}

double mechanical_energy(const RobotState& state, const BodyParams& params) {
  const Mat3 inertia_world =
      state.rotation * params.inertia * state.rotation.transpose();
  const double kinetic =
      0.5 * params.mass * state.linear_velocity.squaredNorm() +
      0.5 * state.angular_velocity.dot(inertia_world * state.angular_velocity);
  const double potential = params.mass * params.gravity.z() * state.position.z();
  return kinetic + potential;
}

Vec3 angular_momentum(const RobotState& state, const BodyParams& params) {
  return state.rotation * params.inertia * state.rotation.transpose() *
         state.angular_velocity;
}

}  // namespace quadmpc
