#include "quadmpc/gait.hpp"

#include <cmath>
#include <stdexcept>

namespace quadmpc {

GaitType gait_from_name(const std::string& name) {
  if (name == "stand") return GaitType::kStand;
  if (name == "trot") return GaitType::kTrot;
  if (name == "pace") return GaitType::kPace;
  if (name == "bound") return GaitType::kBound;
  if (name == "pronk") return GaitType::kPronk;
  throw std::invalid_argument("unknown gait: " + name);
}

const char* gait_name(GaitType type) {
  switch (type) {
    case GaitType::kStand: return "stand";
    case GaitType::kTrot: return "trot";
    case GaitType::kPace: return "pace";
    case GaitType::kBound: return "bound";
    case GaitType::kPronk: return "pronk";
  }
  return "?";
}

namespace {
double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guard against floor rounding at exact integers
  return f;
}
}  // namespace

double GaitSchedule::phase(int leg, double t) const {
  return frac(t / cycle_period - phase_offset[leg]);
}

bool GaitSchedule::in_stance(int leg, double t) const {
  return phase(leg, t) < duty_factor;
}

double GaitSchedule::stance_phase(int leg, double t) const {
  const double p = phase(leg, t);
  return p < duty_factor ? p / duty_factor : 0.0;
}

double GaitSchedule::swing_phase(int leg, double t) const {
  const double p = phase(leg, t);
  if (p < duty_factor || duty_factor >= 1.0) return 0.0;
  return (p - duty_factor) / (1.0 - duty_factor);
}

GaitSchedule GaitSchedule::make(GaitType type, double cycle_period,
                                double duty_factor) {
  if (!(cycle_period > 0.0)) {
    throw std::invalid_argument("gait: cycle period must be positive");
  }
  if (!(duty_factor > 0.0) || duty_factor > 1.0) {
    throw std::invalid_argument("gait: duty factor must be in (0, 1]");
  }
  GaitSchedule g;
  g.type = type;
  g.cycle_period = cycle_period;
  g.duty_factor = duty_factor;
  switch (type) {
    case GaitType::kStand:
      g.duty_factor = 1.0;
      g.phase_offset = {0.0, 0.0, 0.0, 0.0};
      break;
    case GaitType::kTrot:  // diagonal pairs {FL,RR} and {FR,RL}
      g.phase_offset = {0.0, 0.5, 0.5, 0.0};
      break;
    case GaitType::kPace:  // lateral pairs {FL,RL} and {FR,RR}
      g.phase_offset = {0.0, 0.5, 0.0, 0.5};
      break;
    case GaitType::kBound:  // front pair {FL,FR} and rear pair {RL,RR}
      g.phase_offset = {0.0, 0.0, 0.5, 0.5};
      break;
    case GaitType::kPronk:  // all legs together
      g.phase_offset = {0.0, 0.0, 0.0, 0.0};
      break;
  }
  return g;
}

ContactTable schedule_contacts(const GaitSchedule& gait, double t, int horizon,
                               double dt_mpc) {
  ContactTable table(horizon);
  for (int k = 0; k < horizon; ++k) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      table[k][leg] = gait.in_stance(leg, t + k * dt_mpc);
    }
  }
  return table;
}

std::vector<VirtualLegGroup> virtual_leg_groups(const GaitSchedule& gait) {
  std::vector<VirtualLegGroup> groups;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    bool placed = false;
    for (auto& g : groups) {
      if (std::abs(g.phase_offset - gait.phase_offset[leg]) < 1e-12) {
        g.legs.push_back(leg);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({{leg}, gait.phase_offset[leg], true});
  }
  return groups;
}

}  // namespace quadmpc
