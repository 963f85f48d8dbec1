#pragma once

#include <array>

#include "quadmpc/gait.hpp"
#include "quadmpc/leg_kinematics.hpp"
#include "quadmpc/mpc_builder.hpp"
#include "quadmpc/qp_solver.hpp"
#include "quadmpc/rigid_body.hpp"
#include "quadmpc/swing.hpp"

namespace quadmpc {

// Desired body twist in the heading frame; rotated by the reference yaw
// before it enters the MPC reference.
struct TwistCommand {
  double vx = 0.0;        // m/s
  double vy = 0.0;        // m/s
  double yaw_rate = 0.0;  // rad/s
};

struct ControllerConfig {
  BodyParams body;  // nominal model the controller plans with
  LegGeometry leg;
  MpcConfig mpc;

  double control_dt = 0.001;  // s, leg-control tick
  int ticks_per_mpc = 25;     // MPC solve cadence in ticks

  double body_height = 0.29;   // m, desired CoM height
  double ground_height = 0.0;  // m
  double swing_apex = 0.07;    // m above ground
  double raibert_gain = 0.03;  // s
  double max_step = 0.25;      // m, foothold offset clamp

  Vec3 swing_kp = {1200.0, 1200.0, 900.0};  // N/m, hip frame
  Vec3 swing_kd = {20.0, 20.0, 20.0};       // N s/m

  double qp_tol = 1e-5;
  int qp_max_iters = 4000;
  // The position reference is kept within this distance of the body so a
  // transient cannot wind the tracking error up.
  double max_anchor_error = 0.15;  // m

  void validate() const;  // throws std::invalid_argument
};

enum class LegMode { kStance, kSwing };

struct LegCommand {
  LegMode mode = LegMode::kStance;
  Vec3 torque = Vec3::Zero();  // (abad, hip, knee), N m
};

struct JointState {
  Vec3 q = Vec3::Zero();
  Vec3 qd = Vec3::Zero();
};

struct ControlDiagnostics {
  bool mpc_tick = false;  // an MPC solve ran on this tick
  QpStatus qp_status = QpStatus::kSolved;
  int qp_iterations = 0;
  bool qp_fallback = false;  // commanded forces are decayed stale forces
  std::array<Vec3, kNumLegs> forces{};  // currently applied GRFs, world frame
  std::array<double, kNumLegs> swing_phase{};  // 0 while in stance
  // World-frame foot reference the swing controller is tracking; equals the
  // measured foot position for stance legs.
  std::array<Vec3, kNumLegs> foot_targets{};
  std::array<Vec3, kNumLegs> foot_target_velocities{};
};

struct ControlOutput {
  std::array<LegCommand, kNumLegs> legs;
  ControlDiagnostics diag;
};

// Single-owner stateful controller ticked at the leg-control rate. Every
// ticks_per_mpc ticks it re-linearizes the body model at the current yaw and
// foot positions, condenses the horizon problem and solves for ground
// reaction forces; between solves stance legs hold the last solution and
// swing legs run impedance control along their Bezier curves.
class LocomotionController {
 public:
  explicit LocomotionController(const ControllerConfig& config);

  ControlOutput control_tick(const RobotState& state,
                             const std::array<JointState, kNumLegs>& joints,
                             const GaitSchedule& gait, const TwistCommand& cmd,
                             double t);

  const ControllerConfig& config() const { return config_; }
  // World foot position from body pose + joint angles.
  Vec3 foot_position_world(const RobotState& state, int leg,
                           const JointState& joint) const;
  // Per-leg touchdown height override (terrain/foothold tables). Defaults to
  // the configured ground height.
  void set_ground_height(int leg, double height);

 private:
  void advance_reference(const RobotState& state, const TwistCommand& cmd);
  void run_mpc(const RobotState& state,
               const std::array<Vec3, kNumLegs>& feet,
               const GaitSchedule& gait, const TwistCommand& cmd, double t,
               ControlDiagnostics* diag);

  ControllerConfig config_;
  QpSolver solver_;

  bool initialized_ = false;
  long tick_count_ = 0;
  double ref_yaw_ = 0.0;
  Vec3 ref_position_ = Vec3::Zero();

  VecX last_u_;
  bool have_solution_ = false;
  std::array<Vec3, kNumLegs> forces_{};
  QpStatus qp_status_ = QpStatus::kSolved;
  int qp_iterations_ = 0;
  bool qp_fallback_ = false;

  std::array<bool, kNumLegs> leg_was_swinging_{};
  std::array<Vec3, kNumLegs> swing_start_{};
  std::array<double, kNumLegs> ground_height_{};
};

}  // namespace quadmpc
