#include "quadmpc/slip_hopper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadmpc {

namespace {

constexpr double kMaxStep = 5e-4 + 1e-12;  // s
constexpr double kEventTol = 1e-9;         // s

// Integrated coordinates per phase. Flight: Cartesian body + leg servo;
// stance: polar leg (gamma = absolute leg angle from vertical) + pitch,
// with the Cartesian fields reconstructed afterwards.
struct Deriv {
  double d[8];
};

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

double axial_force(const HopperState& s, const HopperParams& p) {
  return p.spring_k * (s.rest_length - s.leg_length) -
         p.spring_damping * s.leg_length_rate;
}

void flight_pack(const HopperState& s, double* y) {
  y[0] = s.x;
  y[1] = s.z;
  y[2] = s.vx;
  y[3] = s.vz;
  y[4] = s.pitch;
  y[5] = s.pitch_rate;
  y[6] = s.leg_angle;
  y[7] = s.leg_rate;
}

void flight_unpack(const double* y, HopperState* s) {
  s->x = y[0];
  s->z = y[1];
  s->vx = y[2];
  s->vz = y[3];
  s->pitch = y[4];
  s->pitch_rate = y[5];
  s->leg_angle = y[6];
  s->leg_rate = y[7];
}

void flight_deriv(const double* y, const HopperState& s,
                  const HopperParams& p, double* dy) {
  dy[0] = y[2];
  dy[1] = y[3];
  dy[2] = 0.0;
  dy[3] = -p.gravity;
  dy[4] = y[5];
  dy[5] = 0.0;
  dy[6] = y[7];
  dy[7] = p.servos_enabled ? p.servo_omega * p.servo_omega * (s.leg_target - y[6]) -
                                 2.0 * p.servo_omega * y[7]
                           : 0.0;
}

void stance_pack(const HopperState& s, double* y) {
  y[0] = s.leg_length;
  y[1] = s.leg_length_rate;
  y[2] = s.pitch - s.leg_angle;  // gamma
  y[3] = s.pitch_rate - s.leg_rate;
  y[4] = s.pitch;
  y[5] = s.pitch_rate;
  y[6] = 0.0;
  y[7] = 0.0;
}

void stance_unpack(const double* y, HopperState* s) {
  const double r = y[0], rd = y[1], gamma = y[2], gd = y[3];
  s->leg_length = r;
  s->leg_length_rate = rd;
  s->pitch = y[4];
  s->pitch_rate = y[5];
  s->leg_angle = s->pitch - gamma;
  s->leg_rate = s->pitch_rate - gd;
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  s->x = s->foot_x - r * sg;
  s->z = r * cg;
  s->vx = -rd * sg - r * gd * cg;
  s->vz = rd * cg - r * gd * sg;
}

void stance_deriv(const double* y, const HopperState& s,
                  const HopperParams& p, double* dy) {
  const double r = y[0], rd = y[1], gamma = y[2], gd = y[3];
  const double pitch = y[4], pitch_rate = y[5];
  const double u = p.servos_enabled
                       ? -p.pitch_kp * pitch - p.pitch_kd * pitch_rate
                       : 0.0;
  const double spring =
      p.spring_k * (s.rest_length - r) - p.spring_damping * rd;
  dy[0] = rd;
  dy[1] = r * gd * gd - p.gravity * std::cos(gamma) + spring / p.mass;
  dy[2] = gd;
  dy[3] = (p.mass * p.gravity * r * std::sin(gamma) -
           2.0 * p.mass * r * rd * gd - u) /
          (p.mass * r * r);
  dy[4] = pitch_rate;
  dy[5] = u / p.inertia;
  dy[6] = 0.0;
  dy[7] = 0.0;
}

// One RK4 step of length h within the current phase.
HopperState flow(const HopperState& s, const HopperParams& p, double h) {
  double y0[8], k1[8], k2[8], k3[8], k4[8], tmp[8];
  const bool flight = s.phase == HopperPhase::kFlight;
  if (flight) {
    flight_pack(s, y0);
  } else {
    stance_pack(s, y0);
  }
  auto eval = [&](const double* y, double* dy) {
    if (flight) {
      flight_deriv(y, s, p, dy);
    } else {
      stance_deriv(y, s, p, dy);
    }
  };
  eval(y0, k1);
  for (int i = 0; i < 8; ++i) tmp[i] = y0[i] + 0.5 * h * k1[i];
  eval(tmp, k2);
  for (int i = 0; i < 8; ++i) tmp[i] = y0[i] + 0.5 * h * k2[i];
  eval(tmp, k3);
  for (int i = 0; i < 8; ++i) tmp[i] = y0[i] + h * k3[i];
  eval(tmp, k4);
  for (int i = 0; i < 8; ++i) {
    tmp[i] = y0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  HopperState out = s;
  if (flight) {
    flight_unpack(tmp, &out);
  } else {
    stance_unpack(tmp, &out);
  }
  out.t = s.t + h;
  return out;
}

// Signed event function whose upward zero crossing ends the current phase.
double event_value(const HopperState& s, const HopperParams& p) {
  switch (s.phase) {
    case HopperPhase::kFlight:
      return -s.foot_height();  // touchdown: foot height falls through 0
    case HopperPhase::kCompression:
      return s.leg_length_rate;  // max compression: r-dot rises through 0
    case HopperPhase::kThrust:
      return -axial_force(s, p);  // liftoff: leg force falls through 0
  }
  return 0.0;
}

void apply_transition(HopperState* s, const HopperParams& p) {
  switch (s->phase) {
    case HopperPhase::kFlight: {
      // Pin the foot and map body velocity to the polar leg rates; the leg
      // is massless so touchdown is lossless.
      const double gamma = s->pitch - s->leg_angle;
      s->foot_x = s->x + s->leg_length * std::sin(gamma);
      const double sg = std::sin(gamma), cg = std::cos(gamma);
      s->leg_length_rate = -s->vx * sg + s->vz * cg;
      const double gd = (-s->vx * cg - s->vz * sg) / s->leg_length;
      s->leg_rate = s->pitch_rate - gd;
      s->stance_entry_t = s->t;
      s->phase = HopperPhase::kCompression;
      break;
    }
    case HopperPhase::kCompression:
      s->rest_length = p.rest_length + p.thrust_dr;
      s->phase = HopperPhase::kThrust;
      break;
    case HopperPhase::kThrust:
      s->ts_estimate = s->t - s->stance_entry_t;
      s->rest_length = p.rest_length;
      s->leg_length = p.rest_length;
      s->leg_length_rate = 0.0;
      s->phase = HopperPhase::kFlight;
      break;
  }
}

void check_viable(const HopperState& s, const HopperParams& p) {
  if (s.phase == HopperPhase::kFlight) {
    if (s.z <= 0.0) throw std::runtime_error("hopper: body hit the ground");
  } else if (s.leg_length < 0.1 * p.rest_length) {
    throw std::runtime_error("hopper: leg bottomed out");
  }
}

}  // namespace

void HopperParams::validate() const {
  if (!(mass > 0.0) || !(inertia > 0.0) || !(gravity > 0.0)) {
    throw std::invalid_argument("hopper: mass, inertia, gravity must be positive");
  }
  if (!(rest_length > 0.0) || !(spring_k > 0.0)) {
    throw std::invalid_argument("hopper: leg parameters must be positive");
  }
  if (spring_damping < 0.0 || thrust_dr < 0.0 || speed_gain < 0.0) {
    throw std::invalid_argument("hopper: gains must be non-negative");
  }
  if (!(servo_omega > 0.0) || pitch_kp < 0.0 || pitch_kd < 0.0) {
    throw std::invalid_argument("hopper: servo parameters out of range");
  }
}

double HopperState::foot_height() const {
  return z - leg_length * std::cos(pitch - leg_angle);
}

HopperState initial_hopper_state(const HopperParams& params, double height) {
  params.validate();
  HopperState s;
  s.z = height;
  s.leg_length = params.rest_length;
  s.rest_length = params.rest_length;
  s.ts_estimate = M_PI * std::sqrt(params.mass / params.spring_k);
  s.phase = HopperPhase::kFlight;
  return s;
}

double flight_control(const HopperState& state, double xdot_ref,
                      double ts_estimate, double speed_gain) {
  const double xf = state.vx * ts_estimate / 2.0 +
                    speed_gain * (state.vx - xdot_ref);
  const double r = state.leg_length;
  const double ratio = clamp(xf / r, -1.0, 1.0);
  return state.pitch - std::asin(ratio);
}

StanceControl stance_control(const HopperState& state,
                             const HopperParams& params) {
  StanceControl out;
  if (params.servos_enabled) {
    out.hip_torque =
        -params.pitch_kp * state.pitch - params.pitch_kd * state.pitch_rate;
  }
  if (state.phase == HopperPhase::kThrust) {
    out.rest_extension = params.thrust_dr;
  }
  return out;
}

HopperState step_hybrid(const HopperState& state, const HopperParams& params,
                        double xdot_ref, double dt) {
  if (!(dt > 0.0) || dt > kMaxStep) {
    throw std::invalid_argument("hopper: step must be in (0, 0.5 ms]");
  }

  HopperState s = state;
  if (s.phase == HopperPhase::kFlight && params.servos_enabled) {
    s.leg_target = flight_control(s, xdot_ref, s.ts_estimate, params.speed_gain);
  }

  double remaining = dt;
  for (int events = 0; events < 4 && remaining > 0.0; ++events) {
    HopperState next = flow(s, params, remaining);
    if (!(event_value(s, params) < 0.0 && event_value(next, params) >= 0.0)) {
      s = next;
      break;
    }
    // Bisect the crossing time inside this step to 1e-9 s.
    double lo = 0.0, hi = remaining;
    while (hi - lo > kEventTol) {
      const double mid = 0.5 * (lo + hi);
      if (event_value(flow(s, params, mid), params) >= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    HopperState at_event = flow(s, params, hi);
    apply_transition(&at_event, params);
    remaining -= hi;
    s = at_event;
  }
  check_viable(s, params);
  return s;
}

double hopper_energy(const HopperState& state, const HopperParams& params) {
  const double kinetic =
      0.5 * params.mass * (state.vx * state.vx + state.vz * state.vz) +
      0.5 * params.inertia * state.pitch_rate * state.pitch_rate;
  const double compression = state.rest_length - state.leg_length;
  return kinetic + params.mass * params.gravity * state.z +
         0.5 * params.spring_k * compression * compression;
}

SlipHopper::SlipHopper(const HopperParams& params, const HopperState& initial)
    : params_(params), state_(initial) {
  params_.validate();
  apex_ = initial.z;
}

void SlipHopper::step(double xdot_ref, double dt) {
  const HopperPhase before = state_.phase;
  state_ = step_hybrid(state_, params_, xdot_ref, dt);
  apex_ = std::max(apex_, state_.z);

  if (before == HopperPhase::kFlight && state_.phase != HopperPhase::kFlight) {
    if (seen_touchdown_) {
      HopRecord rec;
      rec.touchdown_t = state_.stance_entry_t;
      rec.apex_z = apex_;
      rec.mean_vx = (state_.x - last_touchdown_x_) /
                    (state_.stance_entry_t - last_touchdown_t_);
      rec.stance_duration = state_.ts_estimate;
      hops_.push_back(rec);
    }
    seen_touchdown_ = true;
    last_touchdown_t_ = state_.stance_entry_t;
    last_touchdown_x_ = state_.x;
    apex_ = state_.z;
  }
}

}  // namespace quadmpc
