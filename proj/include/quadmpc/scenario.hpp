#pragma once

#include <string>
#include <vector>

#include "quadmpc/gait.hpp"
#include "quadmpc/locomotion.hpp"

namespace quadmpc {

struct TwistSegment {
  double start = 0.0;  // s
  TwistCommand command;
};

struct Disturbance {
  double time = 0.0;   // s
  Vec3 impulse = Vec3::Zero();  // N s, world frame
  Vec3 offset = Vec3::Zero();   // m, body-frame application point
};

// One closed-loop run: gait, piecewise-constant twist profile, impulsive
// disturbances and true-model perturbation. Parsed from a sectioned text
// file; see docs in the repository README for the schema.
struct Scenario {
  std::string name = "scenario";
  GaitType gait = GaitType::kStand;
  double duration = 5.0;       // s
  double cycle_period = 0.5;   // s
  double duty_factor = -1.0;   // <0 keeps the gait default

  std::vector<TwistSegment> commands;
  std::vector<Disturbance> disturbances;

  double mass_scale = 1.0;     // applied to the simulated (true) body only
  double inertia_scale = 1.0;

  Vec3 initial_position = {0.0, 0.0, 0.29};
  Vec3 initial_velocity = Vec3::Zero();
  double initial_yaw = 0.0;

  std::vector<double> foothold_heights;  // per successive touchdown, m

  GaitSchedule gait_schedule() const;
  void validate() const;  // throws std::invalid_argument naming the field
};

// Strict parser: unknown keys, malformed rows and invariant violations all
// throw std::runtime_error carrying the line number and offending key.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace quadmpc
