#pragma once

#include <array>
#include <string>
#include <vector>

#include "quadmpc/geometry.hpp"

namespace quadmpc {

enum class GaitType { kStand, kTrot, kPace, kBound, kPronk };

GaitType gait_from_name(const std::string& name);  // throws on unknown name
const char* gait_name(GaitType type);

// Periodic contact pattern. A leg is in stance while its cycle phase
// (shifted by its offset) lies below the duty factor.
struct GaitSchedule {
  GaitType type = GaitType::kStand;
  double cycle_period = 0.5;                      // s
  std::array<double, kNumLegs> phase_offset{};    // in [0, 1), order FL FR RL RR
  double duty_factor = 1.0;                       // in (0, 1]

  double stance_duration() const { return duty_factor * cycle_period; }
  double swing_duration() const { return (1.0 - duty_factor) * cycle_period; }

  // Cycle phase of a leg in [0, 1); stance occupies [0, duty_factor).
  double phase(int leg, double t) const;
  bool in_stance(int leg, double t) const;
  // Normalized progress through the current stance / swing interval, in [0, 1).
  double stance_phase(int leg, double t) const;
  double swing_phase(int leg, double t) const;

  static GaitSchedule make(GaitType type, double cycle_period = 0.5,
                           double duty_factor = 0.5);
};

using ContactTable = std::vector<std::array<bool, kNumLegs>>;

// Contact pattern over an MPC horizon: leg i is in stance at step k iff
// frac((t + k*dt_mpc)/cycle - offset_i) < duty.
ContactTable schedule_contacts(const GaitSchedule& gait, double t, int horizon,
                               double dt_mpc);

// Legs sharing a phase offset act as one virtual leg: they touch down
// together and the controller expects them to carry equal force.
struct VirtualLegGroup {
  std::vector<int> legs;
  double phase_offset = 0.0;
  bool force_equal = true;
};

std::vector<VirtualLegGroup> virtual_leg_groups(const GaitSchedule& gait);

}  // namespace quadmpc
