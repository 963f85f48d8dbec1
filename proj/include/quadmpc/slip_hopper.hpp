#pragma once

#include <vector>

namespace quadmpc {

// Planar spring-loaded inverted pendulum hopper: point-mass body with pitch
// inertia on a massless springy leg. The machine phase drives which control
// law is active; LOADING/UNLOADING are folded into their neighbours.
enum class HopperPhase { kFlight, kCompression, kThrust };

struct HopperParams {
  double mass = 10.0;          // kg
  double inertia = 1.0;        // kg m^2, pitch
  double gravity = 9.81;       // m/s^2
  double rest_length = 0.5;    // m
  double spring_k = 4000.0;    // N/m
  double spring_damping = 25.0;  // N s/m, the stance energy sink
  double thrust_dr = 0.015;    // m, rest-length extension during THRUST
  double speed_gain = 0.10;    // s, foot-placement velocity gain
  double servo_omega = 30.0;   // rad/s, flight leg-positioning loop
  double pitch_kp = 60.0;      // N m/rad, stance hip servo
  double pitch_kd = 8.0;       // N m s/rad
  // false freezes the flight leg servo and the stance hip servo; with
  // thrust_dr = 0 and spring_damping = 0 the hybrid flow is conservative.
  bool servos_enabled = true;

  void validate() const;  // throws std::invalid_argument
};

struct HopperState {
  double t = 0.0;
  double x = 0.0, z = 0.6;       // body position, m
  double vx = 0.0, vz = 0.0;     // m/s
  double pitch = 0.0;            // rad
  double pitch_rate = 0.0;       // rad/s
  // Leg angle from the body axis; the absolute leg angle from vertical is
  // pitch - leg_angle, positive when the foot leads the body.
  double leg_angle = 0.0;        // rad
  double leg_rate = 0.0;         // rad/s
  double leg_length = 0.5;       // m
  double leg_length_rate = 0.0;  // m/s
  double rest_length = 0.5;      // m, commanded (extends during THRUST)
  HopperPhase phase = HopperPhase::kFlight;
  double foot_x = 0.0;           // m, pinned contact point during stance
  double stance_entry_t = 0.0;
  double ts_estimate = 0.0;      // s, last measured stance duration
  double leg_target = 0.0;       // rad, flight servo setpoint

  double foot_height() const;  // m above the ground plane
};

HopperState initial_hopper_state(const HopperParams& params, double height);

// Foot-placement target angle from the neutral-point rule, relative to the
// body axis. The horizontal offset is clamped to the leg length.
double flight_control(const HopperState& state, double xdot_ref,
                      double ts_estimate, double speed_gain);

struct StanceControl {
  double hip_torque = 0.0;      // N m on the body, reacted through the leg
  double rest_extension = 0.0;  // m added to the spring rest length
};

StanceControl stance_control(const HopperState& state,
                             const HopperParams& params);

// Advances one control tick of at most 0.5 ms, detecting touchdown, maximum
// compression and liftoff by bisection to 1e-9 s and switching phase at the
// event. Throws std::runtime_error when the body reaches the ground or the
// leg bottoms out.
HopperState step_hybrid(const HopperState& state, const HopperParams& params,
                        double xdot_ref, double dt);

// Kinetic + gravitational + spring energy of the hybrid state.
double hopper_energy(const HopperState& state, const HopperParams& params);

struct HopRecord {
  double touchdown_t = 0.0;
  double apex_z = 0.0;     // highest body point of the preceding flight
  double mean_vx = 0.0;    // touchdown-to-touchdown average forward speed
  double stance_duration = 0.0;  // of the stance before this flight
};

// Convenience rollout wrapper keeping per-hop statistics.
class SlipHopper {
 public:
  SlipHopper(const HopperParams& params, const HopperState& initial);

  void step(double xdot_ref, double dt);
  const HopperState& state() const { return state_; }
  const HopperParams& params() const { return params_; }
  const std::vector<HopRecord>& hops() const { return hops_; }

 private:
  HopperParams params_;
  HopperState state_;
  std::vector<HopRecord> hops_;
  double apex_ = 0.0;
  double last_touchdown_t_ = 0.0;
  double last_touchdown_x_ = 0.0;
  bool seen_touchdown_ = false;
};

}  // namespace quadmpc
