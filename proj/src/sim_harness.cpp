#include "quadmpc/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace quadmpc {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

bool state_finite(const RobotState& s) {
  return finite(s.position) && finite(s.linear_velocity) &&
         finite(s.angular_velocity) && s.rotation.allFinite();
}

std::array<JointState, kNumLegs> joints_from_feet(
    const RobotState& state, const ControllerConfig& cfg,
    const std::array<Vec3, kNumLegs>& feet,
    const std::array<Vec3, kNumLegs>& foot_velocities) {
  std::array<JointState, kNumLegs> joints;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const double side = leg_side_sign(leg);
    const Vec3 rel = state.rotation.transpose() * (feet[leg] - state.position) -
                     cfg.body.hip_offsets[leg];
    joints[leg].q = inverse_kinematics(cfg.leg, side, rel);
    const Vec3 rel_vel =
        state.rotation.transpose() *
        (foot_velocities[leg] - state.linear_velocity -
         state.angular_velocity.cross(feet[leg] - state.position));
    const Mat3 j = leg_jacobian(cfg.leg, side, joints[leg].q);
    joints[leg].qd = j.partialPivLu().solve(rel_vel);
  }
  return joints;
}

struct SegmentSpan {
  double start;
  double end;
  TwistCommand cmd;
};

std::vector<SegmentSpan> segment_spans(const Scenario& sc) {
  std::vector<SegmentSpan> spans;
  if (sc.commands.empty() || sc.commands.front().start > 0.0) {
    spans.push_back({0.0, sc.duration, TwistCommand{}});
  }
  for (std::size_t i = 0; i < sc.commands.size(); ++i) {
    if (!spans.empty()) spans.back().end = sc.commands[i].start;
    spans.push_back({sc.commands[i].start, sc.duration, sc.commands[i].command});
  }
  return spans;
}

void fmt(std::string* line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  *line += buf;
}

}  // namespace

SimResult run_scenario(const Scenario& scenario,
                       const ControllerConfig& config) {
  scenario.validate();

  LocomotionController controller(config);

  BodyParams true_body = config.body;
  true_body.mass *= scenario.mass_scale;
  true_body.inertia *= scenario.inertia_scale;
  true_body.validate();

  const GaitSchedule gait = scenario.gait_schedule();

  RobotState state;
  state.rotation = rot_z(scenario.initial_yaw);
  state.position = scenario.initial_position;
  state.linear_velocity = scenario.initial_velocity;

  std::array<Vec3, kNumLegs> feet;
  std::array<Vec3, kNumLegs> foot_velocities;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const double side = leg_side_sign(leg);
    const Vec3 plane = config.body.hip_offsets[leg] +
                       Vec3(0.0, side * config.leg.abad_offset, 0.0);
    feet[leg] = state.position + state.rotation * plane;
    feet[leg].z() = config.ground_height;
    foot_velocities[leg].setZero();
  }

  std::array<int, kNumLegs> touchdowns{};
  std::array<LegMode, kNumLegs> prev_modes;
  prev_modes.fill(LegMode::kStance);

  std::vector<Disturbance> pending = scenario.disturbances;
  std::sort(pending.begin(), pending.end(),
            [](const Disturbance& a, const Disturbance& b) { return a.time < b.time; });
  std::size_t next_disturbance = 0;

  const std::vector<SegmentSpan> spans = segment_spans(scenario);
  std::size_t span_idx = 0;
  std::vector<double> seg_err2(spans.size(), 0.0);
  std::vector<double> seg_vx(spans.size(), 0.0);
  std::vector<double> seg_vy(spans.size(), 0.0);
  std::vector<long> seg_count(spans.size(), 0);

  SimResult result;
  const double dt = config.control_dt;
  const long ticks = std::lround(scenario.duration / dt);
  result.log.ticks.reserve(ticks);

  double qp_iter_sum = 0.0;
  long qp_solves = 0;

  for (long i = 0; i < ticks; ++i) {
    const double t = i * dt;

    while (next_disturbance < pending.size() &&
           pending[next_disturbance].time <= t + 1e-12) {
      const Disturbance& d = pending[next_disturbance];
      state.linear_velocity += d.impulse / true_body.mass;
      const Mat3 inertia_w =
          state.rotation * true_body.inertia * state.rotation.transpose();
      const Vec3 arm = state.rotation * d.offset;
      state.angular_velocity += inertia_w.ldlt().solve(arm.cross(d.impulse));
      ++next_disturbance;
    }

    while (span_idx + 1 < spans.size() && spans[span_idx + 1].start <= t + 1e-12) {
      ++span_idx;
    }
    const TwistCommand cmd = spans[span_idx].cmd;

    if (!scenario.foothold_heights.empty()) {
      const int last = static_cast<int>(scenario.foothold_heights.size()) - 1;
      for (int leg = 0; leg < kNumLegs; ++leg) {
        controller.set_ground_height(
            leg, scenario.foothold_heights[std::min(touchdowns[leg], last)]);
      }
    }

    ControlOutput out;
    std::array<JointState, kNumLegs> joints;
    try {
      joints = joints_from_feet(state, config, feet, foot_velocities);
      out = controller.control_tick(state, joints, gait, cmd, t);
    } catch (const std::exception& e) {
      result.metrics.error = e.what();
      result.metrics.fell = true;
      result.metrics.fall_time = t;
      break;
    }

    TickRecord rec;
    rec.t = t;
    rec.state = state;
    rec.feet = feet;
    rec.forces = out.diag.forces;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      rec.torques[leg] = out.legs[leg].torque;
      rec.modes[leg] = out.legs[leg].mode;
    }
    rec.qp_status = out.diag.qp_status;
    rec.qp_iterations = out.diag.qp_iterations;
    rec.mpc_tick = out.diag.mpc_tick;
    result.log.ticks.push_back(rec);

    const Vec3 rpy = state.euler();
    result.metrics.max_roll = std::max(result.metrics.max_roll, std::abs(rpy.x()));
    result.metrics.max_pitch = std::max(result.metrics.max_pitch, std::abs(rpy.y()));
    if (out.diag.mpc_tick) {
      qp_iter_sum += out.diag.qp_iterations;
      ++qp_solves;
      if (out.diag.qp_fallback) ++result.metrics.qp_fallback_ticks;
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      result.metrics.energy_proxy +=
          out.legs[leg].torque.dot(joints[leg].qd) * dt;
    }

    const Eigen::Vector2d v_heading =
        (rot_z(-rpy.z()) * state.linear_velocity).head<2>();
    result.metrics.final_speed = v_heading.x();
    const Eigen::Vector2d v_err =
        v_heading - Eigen::Vector2d(cmd.vx, cmd.vy);
    seg_err2[span_idx] += v_err.squaredNorm();
    seg_vx[span_idx] += v_heading.x();
    seg_vy[span_idx] += v_heading.y();
    ++seg_count[span_idx];

    const bool fallen =
        state.position.z() < 0.4 * config.body_height ||
        std::abs(rpy.x()) > 0.8 || std::abs(rpy.y()) > 0.8;
    if (fallen || !state_finite(state)) {
      result.metrics.fell = true;
      result.metrics.fall_time = t;
      break;
    }

    ContactSet contacts;
    contacts.foot_positions = feet;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const bool stance = out.legs[leg].mode == LegMode::kStance;
      contacts.in_contact[leg] = stance;
      contacts.forces[leg] = stance ? out.diag.forces[leg] : Vec3::Zero();
    }
    state = integrate_step(state, true_body, contacts, dt);

    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (out.legs[leg].mode == LegMode::kSwing) {
        feet[leg] = out.diag.foot_targets[leg];
        foot_velocities[leg] = out.diag.foot_target_velocities[leg];
      } else {
        if (prev_modes[leg] == LegMode::kSwing) ++touchdowns[leg];
        foot_velocities[leg].setZero();
      }
      prev_modes[leg] = out.legs[leg].mode;
    }
  }

  result.metrics.mean_qp_iterations =
      qp_solves > 0 ? qp_iter_sum / qp_solves : 0.0;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    SegmentMetrics m;
    m.start = spans[s].start;
    m.end = spans[s].end;
    if (seg_count[s] > 0) {
      m.rms_speed_error = std::sqrt(seg_err2[s] / seg_count[s]);
      m.mean_vx = seg_vx[s] / seg_count[s];
      m.mean_vy = seg_vy[s] / seg_count[s];
    }
    result.metrics.segments.push_back(m);
  }
  return result;
}

void write_csv(const TrajectoryLog& log, std::ostream& out) {
  static const char* kLegNames[kNumLegs] = {"fl", "fr", "rl", "rr"};
  std::string header = "time,pos_x,pos_y,pos_z,roll,pitch,yaw,"
                       "omega_x,omega_y,omega_z,vel_x,vel_y,vel_z";
  for (const char* leg : kLegNames) {
    for (const char* axis : {"x", "y", "z"}) {
      header += ",foot_";
      header += leg;
      header += "_";
      header += axis;
    }
  }
  for (const char* leg : kLegNames) {
    for (const char* axis : {"x", "y", "z"}) {
      header += ",force_";
      header += leg;
      header += "_";
      header += axis;
    }
  }
  for (const char* leg : kLegNames) {
    for (const char* joint : {"abad", "hip", "knee"}) {
      header += ",tau_";
      header += leg;
      header += "_";
      header += joint;
    }
  }
  header += ",qp_status,qp_iterations,mpc_tick";
  for (const char* leg : kLegNames) {
    header += ",mode_";
    header += leg;
  }
  out << header << '\n';

  std::string line;
  for (const TickRecord& rec : log.ticks) {
    line.clear();
    fmt(&line, rec.t);
    const Vec3 rpy = rec.state.euler();
    const double body[12] = {rec.state.position.x(), rec.state.position.y(),
                             rec.state.position.z(), rpy.x(), rpy.y(), rpy.z(),
                             rec.state.angular_velocity.x(),
                             rec.state.angular_velocity.y(),
                             rec.state.angular_velocity.z(),
                             rec.state.linear_velocity.x(),
                             rec.state.linear_velocity.y(),
                             rec.state.linear_velocity.z()};
    for (double v : body) {
      line += ',';
      fmt(&line, v);
    }
    for (const auto& group : {rec.feet, rec.forces, rec.torques}) {
      for (const Vec3& v : group) {
        for (int axis = 0; axis < 3; ++axis) {
          line += ',';
          fmt(&line, v(axis));
        }
      }
    }
    line += ',';
    line += std::to_string(static_cast<int>(rec.qp_status));
    line += ',';
    line += std::to_string(rec.qp_iterations);
    line += ',';
    line += rec.mpc_tick ? '1' : '0';
    for (LegMode mode : rec.modes) {
      line += ',';
      line += mode == LegMode::kStance ? '0' : '1';
    }
    out << line << '\n';
  }
}

void write_metrics(const SummaryMetrics& metrics, std::ostream& out) {
  auto put = [&out](const std::string& key, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out << key << " = " << buf << '\n';
  };
  out << "fell = " << (metrics.fell ? 1 : 0) << '\n';
  put("fall_time", metrics.fall_time);
  put("max_roll", metrics.max_roll);
  put("max_pitch", metrics.max_pitch);
  put("mean_qp_iterations", metrics.mean_qp_iterations);
  out << "qp_fallback_ticks = " << metrics.qp_fallback_ticks << '\n';
  put("energy_proxy", metrics.energy_proxy);
  put("final_speed", metrics.final_speed);
  for (std::size_t i = 0; i < metrics.segments.size(); ++i) {
    const SegmentMetrics& m = metrics.segments[i];
    const std::string p = "segment" + std::to_string(i) + "_";
    put(p + "start", m.start);
    put(p + "end", m.end);
    put(p + "rms_speed_error", m.rms_speed_error);
    put(p + "mean_vx", m.mean_vx);
    put(p + "mean_vy", m.mean_vy);
  }
  if (!metrics.error.empty()) out << "error = " << metrics.error << '\n';
}

}  // namespace quadmpc
