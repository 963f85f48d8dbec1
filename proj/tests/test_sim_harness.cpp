#include "quadmpc/sim_harness.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

using namespace quadmpc;

namespace {

Scenario stand_scenario(double duration = 5.0) {
  Scenario sc;
  sc.name = "stand";
  sc.gait = GaitType::kStand;
  sc.duration = duration;
  return sc;
}

Scenario trot_scenario(double duration, double vx) {
  Scenario sc;
  sc.name = "trot";
  sc.gait = GaitType::kTrot;
  sc.duration = duration;
  TwistSegment seg;
  seg.start = 0.0;
  seg.command.vx = vx;
  sc.commands.push_back(seg);
  return sc;
}

double mean_vertical_force(const TrajectoryLog& log, double from_t) {
  double sum = 0.0;
  long count = 0;
  for (const TickRecord& rec : log.ticks) {
    if (rec.t < from_t) continue;
    for (int leg = 0; leg < kNumLegs; ++leg) sum += rec.forces[leg].z();
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

TEST_CASE("standing holds the body still and supports the weight") {
  ControllerConfig cfg;
  const SimResult res = run_scenario(stand_scenario(), cfg);
  CHECK(res.metrics.error.empty());
  CHECK_FALSE(res.metrics.fell);
  REQUIRE(!res.log.ticks.empty());
  CHECK(res.log.ticks.size() == 5000);

  const TickRecord& last = res.log.ticks.back();
  CHECK(last.state.linear_velocity.norm() < 0.01);
  CHECK(std::abs(last.state.position.z() - cfg.body_height) < 0.03);
  CHECK(res.metrics.max_roll < 0.05);
  CHECK(res.metrics.max_pitch < 0.05);

  const double weight = cfg.body.mass * 9.81;
  CHECK(std::abs(mean_vertical_force(res.log, 4.0) - weight) < 0.01 * weight);
  CHECK(res.metrics.qp_fallback_ticks == 0);
}

TEST_CASE("stance feet stay pinned bit-for-bit") {
  ControllerConfig cfg;
  const SimResult res = run_scenario(stand_scenario(1.0), cfg);
  REQUIRE(!res.log.ticks.empty());
  const auto& first = res.log.ticks.front().feet;
  for (const TickRecord& rec : res.log.ticks) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      CHECK(rec.modes[leg] == LegMode::kStance);
      CHECK(rec.feet[leg] == first[leg]);  // no drift at all
    }
  }
}

TEST_CASE("trot tracks a forward command without falling") {
  ControllerConfig cfg;
  const SimResult res = run_scenario(trot_scenario(3.0, 0.3), cfg);
  CHECK(res.metrics.error.empty());
  CHECK_FALSE(res.metrics.fell);

  bool saw_swing = false;
  for (const TickRecord& rec : res.log.ticks) {
    CHECK(rec.state.position.allFinite());
    CHECK(rec.state.linear_velocity.allFinite());
    for (int leg = 0; leg < kNumLegs; ++leg) {
      CHECK(rec.forces[leg].allFinite());
      CHECK(rec.torques[leg].allFinite());
      saw_swing = saw_swing || rec.modes[leg] == LegMode::kSwing;
    }
  }
  CHECK(saw_swing);
  // It actually went somewhere.
  CHECK(res.log.ticks.back().state.position.x() > 0.3);
  REQUIRE(res.metrics.segments.size() == 1);
  CHECK(res.metrics.segments[0].mean_vx > 0.1);
}

TEST_CASE("repeated runs are bitwise deterministic") {
  ControllerConfig cfg;
  const Scenario sc = trot_scenario(2.0, 0.4);
  const SimResult a = run_scenario(sc, cfg);
  const SimResult b = run_scenario(sc, cfg);

  std::ostringstream csv_a, csv_b, met_a, met_b;
  write_csv(a.log, csv_a);
  write_csv(b.log, csv_b);
  write_metrics(a.metrics, met_a);
  write_metrics(b.metrics, met_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(met_a.str() == met_b.str());
  CHECK(!csv_a.str().empty());
}

TEST_CASE("an impulse kicks the measured velocity by impulse over mass") {
  ControllerConfig cfg;
  Scenario sc = stand_scenario(3.0);
  Disturbance d;
  d.time = 1.0;
  d.impulse = Vec3(0.0, 2.0, 0.0);
  sc.disturbances.push_back(d);

  const SimResult res = run_scenario(sc, cfg);
  CHECK_FALSE(res.metrics.fell);
  REQUIRE(res.log.ticks.size() == 3000);
  const long hit = std::lround(d.time / cfg.control_dt);
  const double before = res.log.ticks[hit - 1].state.linear_velocity.y();
  const double after = res.log.ticks[hit].state.linear_velocity.y();
  CHECK(after - before == doctest::Approx(2.0 / cfg.body.mass).epsilon(0.05));
  // The controller damps the shove back out.
  CHECK(std::abs(res.log.ticks.back().state.linear_velocity.y()) < 0.02);
}

TEST_CASE("moderate model error does not break standing") {
  ControllerConfig cfg;
  Scenario sc = stand_scenario(3.0);
  sc.mass_scale = 1.15;
  sc.inertia_scale = 1.15;
  const SimResult res = run_scenario(sc, cfg);
  CHECK_FALSE(res.metrics.fell);
  CHECK(res.log.ticks.back().state.linear_velocity.norm() < 0.02);
  // The heavier body needs more force than the nominal weight.
  CHECK(mean_vertical_force(res.log, 2.0) >
        cfg.body.mass * 9.81 * 1.05);
}

TEST_CASE("foothold table raises the later touchdown targets") {
  ControllerConfig cfg;
  Scenario sc = trot_scenario(2.0, 0.2);
  sc.foothold_heights = {0.0, 0.02, 0.02};
  const SimResult res = run_scenario(sc, cfg);
  CHECK_FALSE(res.metrics.fell);
  // After the first full gait cycle every foot has touched down once, so
  // later stance heights sit at the raised level.
  double max_stance_z = 0.0;
  for (const TickRecord& rec : res.log.ticks) {
    if (rec.t < 1.5) continue;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (rec.modes[leg] == LegMode::kStance) {
        max_stance_z = std::max(max_stance_z, rec.feet[leg].z());
      }
    }
  }
  // Touchdown pins the foot at the last swing sample, a fraction of a
  // millimetre shy of the commanded height.
  CHECK(std::abs(max_stance_z - 0.02) < 1e-3);
}

TEST_CASE("metrics writer emits a stable key = value layout") {
  SummaryMetrics m;
  m.fell = false;
  m.max_roll = 0.025;
  m.final_speed = 0.5;
  SegmentMetrics seg;
  seg.start = 0.0;
  seg.end = 2.0;
  seg.mean_vx = 0.48;
  m.segments.push_back(seg);

  std::ostringstream out;
  write_metrics(m, out);
  const std::string text = out.str();
  CHECK(text.find("fell = 0\n") != std::string::npos);
  CHECK(text.find("max_roll = 0.025\n") != std::string::npos);
  CHECK(text.find("segment0_mean_vx = 0.48\n") != std::string::npos);
  CHECK(text.find("\nerror =") == std::string::npos);  // only present on failure
}
