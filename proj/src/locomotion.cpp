#include "quadmpc/locomotion.hpp"

#include <cmath>
#include <stdexcept>

namespace quadmpc {

void ControllerConfig::validate() const {
  body.validate();
  mpc.validate();
  if (!(control_dt > 0.0)) {
    throw std::invalid_argument("controller: control_dt must be positive");
  }
  if (ticks_per_mpc < 1) {
    throw std::invalid_argument("controller: ticks_per_mpc must be >= 1");
  }
  if (std::abs(mpc.dt_mpc - ticks_per_mpc * control_dt) > 1e-9) {
    throw std::invalid_argument(
        "controller: dt_mpc must equal ticks_per_mpc * control_dt");
  }
  if (!(body_height > 0.0)) {
    throw std::invalid_argument("controller: body_height must be positive");
  }
  if (!(swing_apex > 0.0) || !(max_step > 0.0)) {
    throw std::invalid_argument("controller: swing geometry must be positive");
  }
  if (!(raibert_gain >= 0.0)) {
    throw std::invalid_argument("controller: raibert_gain must be >= 0");
  }
  if ((swing_kp.array() < 0.0).any() || (swing_kd.array() < 0.0).any()) {
    throw std::invalid_argument("controller: impedance gains must be >= 0");
  }
  if (!(qp_tol > 0.0) || qp_max_iters < 1) {
    throw std::invalid_argument("controller: bad qp solve settings");
  }
  if (!(max_anchor_error > 0.0)) {
    throw std::invalid_argument("controller: max_anchor_error must be positive");
  }
}

LocomotionController::LocomotionController(const ControllerConfig& config)
    : config_(config) {
  config_.validate();
  for (Vec3& f : forces_) f.setZero();
  for (Vec3& p : swing_start_) p.setZero();
  ground_height_.fill(config_.ground_height);
}

void LocomotionController::set_ground_height(int leg, double height) {
  ground_height_.at(leg) = height;
}

Vec3 LocomotionController::foot_position_world(const RobotState& state, int leg,
                                               const JointState& joint) const {
  const Vec3 in_body = config_.body.hip_offsets[leg] +
                       forward_kinematics(config_.leg, leg_side_sign(leg), joint.q);
  return state.position + state.rotation * in_body;
}

void LocomotionController::advance_reference(const RobotState& state,
                                             const TwistCommand& cmd) {
  ref_yaw_ += cmd.yaw_rate * config_.control_dt;
  const Vec3 v_world = rot_z(ref_yaw_) * Vec3(cmd.vx, cmd.vy, 0.0);
  ref_position_ += v_world * config_.control_dt;
  ref_position_.z() = config_.body_height;

  Eigen::Vector2d offset = ref_position_.head<2>() - state.position.head<2>();
  const double dist = offset.norm();
  if (dist > config_.max_anchor_error) {
    ref_position_.head<2>() =
        state.position.head<2>() + offset * (config_.max_anchor_error / dist);
  }
}

void LocomotionController::run_mpc(const RobotState& state,
                                   const std::array<Vec3, kNumLegs>& feet,
                                   const GaitSchedule& gait,
                                   const TwistCommand& cmd, double t,
                                   ControlDiagnostics* diag) {
  // All four legs stay model inputs; swing steps are zeroed by equality rows.
  ContactSet cs;
  cs.foot_positions = feet;
  cs.in_contact.fill(true);
  for (Vec3& f : cs.forces) f.setZero();

  LinearModel model = build_continuous(config_.body, state.yaw(), cs, state.position);
  model = discretize(model, config_.mpc.dt_mpc);

  const int horizon = config_.mpc.horizon;
  const double dt = config_.mpc.dt_mpc;
  const ContactTable table = schedule_contacts(gait, t, horizon, dt);

  // Constant-twist reference rolled out from the anchored pose. The anchor
  // yaw is folded into the branch of the measured yaw first so the error
  // never wraps.
  ReferenceTrajectory ref;
  ref.states.resize(horizon);
  const double yaw = state.yaw();
  double yaw_r = yaw + std::remainder(ref_yaw_ - yaw, 2.0 * M_PI);
  Vec3 pos_r = ref_position_;
  for (int k = 0; k < horizon; ++k) {
    yaw_r += cmd.yaw_rate * dt;
    const Vec3 v_world = rot_z(yaw_r) * Vec3(cmd.vx, cmd.vy, 0.0);
    pos_r += v_world * dt;
    Vec13& x = ref.states[k];
    x << 0.0, 0.0, yaw_r, pos_r.x(), pos_r.y(), config_.body_height, 0.0, 0.0,
        cmd.yaw_rate, v_world.x(), v_world.y(), 0.0, 1.0;
  }

  Vec13 x0;
  x0 << state.euler(), state.position, state.angular_velocity,
      state.linear_velocity, 1.0;

  const QpProblem qp = build_mpc(model, table, ref, config_.mpc, x0);
  const VecX* warm =
      (have_solution_ && last_u_.size() == qp.num_vars()) ? &last_u_ : nullptr;
  const QpSolution sol =
      solver_.solve(qp, warm, config_.qp_tol, config_.qp_max_iters);

  diag->mpc_tick = true;
  qp_status_ = sol.status;
  qp_iterations_ = sol.iterations;
  if (sol.status == QpStatus::kSolved) {
    last_u_ = sol.u;
    have_solution_ = true;
    qp_fallback_ = false;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      forces_[leg] = sol.u.segment<3>(3 * leg);
    }
  } else {
    for (Vec3& f : forces_) f *= 0.9;
    if (last_u_.size() > 0) last_u_ *= 0.9;
    qp_fallback_ = true;
  }
}

ControlOutput LocomotionController::control_tick(
    const RobotState& state, const std::array<JointState, kNumLegs>& joints,
    const GaitSchedule& gait, const TwistCommand& cmd, double t) {
  if (!initialized_) {
    ref_yaw_ = state.yaw();
    ref_position_ = state.position;
    ref_position_.z() = config_.body_height;
    initialized_ = true;
  } else {
    advance_reference(state, cmd);
  }

  std::array<Vec3, kNumLegs> feet;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    feet[leg] = foot_position_world(state, leg, joints[leg]);
  }

  ControlOutput out;
  if (tick_count_ % config_.ticks_per_mpc == 0) {
    run_mpc(state, feet, gait, cmd, t, &out.diag);
  }
  ++tick_count_;
  out.diag.qp_status = qp_status_;
  out.diag.qp_iterations = qp_iterations_;
  out.diag.qp_fallback = qp_fallback_;

  const Vec3 vel_ref_world = rot_z(state.yaw()) * Vec3(cmd.vx, cmd.vy, 0.0);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const double side = leg_side_sign(leg);
    LegKinematics kin;
    kin.geom = config_.leg;
    kin.side = side;
    kin.q = joints[leg].q;
    kin.qd = joints[leg].qd;

    if (gait.in_stance(leg, t)) {
      out.legs[leg].mode = LegMode::kStance;
      out.legs[leg].torque = stance_torques(kin, state.rotation, forces_[leg]);
      out.diag.forces[leg] = forces_[leg];
      out.diag.swing_phase[leg] = 0.0;
      out.diag.foot_targets[leg] = feet[leg];
      out.diag.foot_target_velocities[leg].setZero();
      leg_was_swinging_[leg] = false;
    } else {
      if (!leg_was_swinging_[leg]) {
        swing_start_[leg] = feet[leg];
        leg_was_swinging_[leg] = true;
      }
      const double s = gait.swing_phase(leg, t);
      const double duration = gait.swing_duration();

      // Leg-plane origin projected to the ground is the neutral foothold.
      const Vec3 plane_origin =
          config_.body.hip_offsets[leg] + Vec3(0.0, side * config_.leg.abad_offset, 0.0);
      const Vec3 hip_world = state.position + state.rotation * plane_origin;
      const Vec3 foothold = raibert_foot_placement(
          state.linear_velocity.head<2>(), vel_ref_world.head<2>(),
          gait.stance_duration(), config_.raibert_gain, hip_world,
          ground_height_[leg], config_.max_step);

      const SwingTrajectory traj(swing_start_[leg], foothold,
                                 config_.swing_apex, ground_height_[leg]);
      const SwingSample sample = traj.eval(s, duration);

      const Vec3 p_des =
          state.rotation.transpose() * (sample.position - state.position) -
          config_.body.hip_offsets[leg];
      const Vec3 v_des = state.rotation.transpose() *
                         (sample.velocity - state.linear_velocity);

      out.legs[leg].mode = LegMode::kSwing;
      out.legs[leg].torque =
          impedance_torques(kin, p_des, v_des, config_.swing_kp, config_.swing_kd);
      out.diag.forces[leg].setZero();
      out.diag.swing_phase[leg] = s;
      out.diag.foot_targets[leg] = sample.position;
      out.diag.foot_target_velocities[leg] = sample.velocity;
    }
  }
  return out;
}

}  // namespace quadmpc
