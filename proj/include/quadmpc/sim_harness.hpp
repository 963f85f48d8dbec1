#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quadmpc/locomotion.hpp"
#include "quadmpc/scenario.hpp"

namespace quadmpc {

struct TickRecord {
  double t = 0.0;
  RobotState state;
  std::array<Vec3, kNumLegs> feet{};
  std::array<Vec3, kNumLegs> forces{};
  std::array<Vec3, kNumLegs> torques{};
  std::array<LegMode, kNumLegs> modes{};
  QpStatus qp_status = QpStatus::kSolved;
  int qp_iterations = 0;
  bool mpc_tick = false;
};

struct TrajectoryLog {
  std::vector<TickRecord> ticks;
};

struct SegmentMetrics {
  double start = 0.0;
  double end = 0.0;
  double rms_speed_error = 0.0;  // heading-frame horizontal twist error
  double mean_vx = 0.0;          // heading frame
  double mean_vy = 0.0;
};

struct SummaryMetrics {
  bool fell = false;
  double fall_time = -1.0;
  double max_roll = 0.0;
  double max_pitch = 0.0;
  double mean_qp_iterations = 0.0;
  int qp_fallback_ticks = 0;
  double energy_proxy = 0.0;  // integral of torque * joint rate
  double final_speed = 0.0;
  std::vector<SegmentMetrics> segments;
  std::string error;  // nonempty when the controller aborted the run
};

struct SimResult {
  TrajectoryLog log;
  SummaryMetrics metrics;
};

// Closed-loop rollout of a scenario at the controller tick rate. Stance feet
// are pinned in the world and the solved ground reaction forces act on the
// body; swing feet track the controller's swing targets kinematically, the
// legs being massless. Joint states come from inverse kinematics each tick.
// Model perturbations scale only the simulated body, never the controller's.
SimResult run_scenario(const Scenario& scenario,
                       const ControllerConfig& config);

// One row per tick, time first, floats with 9 significant digits. The header
// line names every column.
void write_csv(const TrajectoryLog& log, std::ostream& out);
// Flat key = value lines, same float format.
void write_metrics(const SummaryMetrics& metrics, std::ostream& out);

}  // namespace quadmpc
