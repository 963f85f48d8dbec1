#include "quadmpc/swing.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace quadmpc;

TEST_CASE("raibert placement combines neutral point and velocity correction") {
  const Vec3 hip(0.2, 0.05, 0.31);
  const Eigen::Vector2d vel(0.8, 0.1);
  const Eigen::Vector2d ref(0.5, 0.0);
  const double ts = 0.25, gain = 0.03;
  const Vec3 p = raibert_foot_placement(vel, ref, ts, gain, hip, 0.0, 0.5);
  CHECK(p.x() == doctest::Approx(hip.x() + 0.8 * ts / 2.0 + gain * 0.3));
  CHECK(p.y() == doctest::Approx(hip.y() + 0.1 * ts / 2.0 + gain * 0.1));
  CHECK(p.z() == 0.0);
}

TEST_CASE("raibert placement clamps the step offset, not the hip position") {
  const Vec3 hip(1.0, -2.0, 0.3);
  const Eigen::Vector2d vel(10.0, 0.0);
  const Vec3 p =
      raibert_foot_placement(vel, Eigen::Vector2d::Zero(), 0.3, 0.05, hip, 0.02, 0.25);
  CHECK(p.x() == doctest::Approx(hip.x() + 0.25));
  CHECK(p.y() == doctest::Approx(hip.y()));
  CHECK(p.z() == doctest::Approx(0.02));
}

TEST_CASE("raibert placement moves the foothold with the speed error sign") {
  const Vec3 hip = Vec3::Zero();
  const Eigen::Vector2d ref(0.5, 0.0);
  const Vec3 fast = raibert_foot_placement({0.8, 0.0}, ref, 0.25, 0.03, hip, 0.0);
  const Vec3 slow = raibert_foot_placement({0.2, 0.0}, ref, 0.25, 0.03, hip, 0.0);
  // Overspeed lands further ahead than the same stance at the lower speed
  // plus its neutral offset; both corrections point along the error.
  CHECK(fast.x() - 0.8 * 0.25 / 2.0 == doctest::Approx(0.03 * 0.3));
  CHECK(slow.x() - 0.2 * 0.25 / 2.0 == doctest::Approx(-0.03 * 0.3));
}

TEST_CASE("swing curve hits the endpoints and the apex") {
  const Vec3 start(0.1, -0.05, 0.0);
  const Vec3 end(0.25, 0.02, 0.01);
  const double apex = 0.07, ground = 0.01;
  const SwingTrajectory traj(start, end, apex, ground);

  const SwingSample s0 = traj.eval(0.0);
  CHECK((s0.position - start).norm() == 0.0);
  CHECK(s0.velocity.norm() == 0.0);

  const SwingSample s1 = traj.eval(1.0);
  CHECK((s1.position - end).norm() < 1e-15);  // start + (end-start): roundoff
  CHECK(s1.velocity.norm() == 0.0);

  const SwingSample mid = traj.eval(0.5);
  CHECK(mid.position.z() == doctest::Approx(ground + apex));
  CHECK(mid.velocity.z() == doctest::Approx(0.0));
  CHECK(mid.position.x() == doctest::Approx(0.5 * (start.x() + end.x())));
  CHECK(mid.position.y() == doctest::Approx(0.5 * (start.y() + end.y())));
}

TEST_CASE("swing curve is velocity-continuous at the junction") {
  const SwingTrajectory traj(Vec3(0.0, 0.0, 0.0), Vec3(0.2, 0.1, 0.0), 0.08, 0.0);
  const double eps = 1e-7;
  const SwingSample a = traj.eval(0.5 - eps);
  const SwingSample b = traj.eval(0.5 + eps);
  CHECK((a.position - b.position).norm() < 1e-5);
  CHECK((a.velocity - b.velocity).norm() < 1e-5);
}

TEST_CASE("swing velocity matches finite differences of the position") {
  const SwingTrajectory traj(Vec3(0.05, -0.02, 0.0), Vec3(0.3, 0.06, 0.02), 0.06, 0.02);
  const double h = 1e-6;
  for (double s : {0.1, 0.3, 0.45, 0.6, 0.85}) {
    const Vec3 fd =
        (traj.eval(s + h).position - traj.eval(s - h).position) / (2.0 * h);
    CHECK((fd - traj.eval(s).velocity).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("duration converts phase derivatives into time derivatives") {
  const SwingTrajectory traj(Vec3::Zero(), Vec3(0.2, 0.0, 0.0), 0.07, 0.0);
  const double duration = 0.25;
  const SwingSample unit = traj.eval(0.3);
  const SwingSample timed = traj.eval(0.3, duration);
  CHECK((timed.position - unit.position).norm() == 0.0);
  CHECK((timed.velocity * duration - unit.velocity).norm() < 1e-12);
  CHECK((timed.acceleration * duration * duration - unit.acceleration).norm() < 1e-10);
}

TEST_CASE("swing phase outside the unit interval throws") {
  const SwingTrajectory traj(Vec3::Zero(), Vec3::UnitX(), 0.05, 0.0);
  CHECK_THROWS_AS(traj.eval(-0.01), std::domain_error);
  CHECK_THROWS_AS(traj.eval(1.01), std::domain_error);
}

TEST_CASE("the foot never dips below the lower of its endpoints") {
  const SwingTrajectory traj(Vec3(0.0, 0.0, 0.015), Vec3(0.2, 0.0, 0.0), 0.07, 0.0);
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    CHECK(traj.eval(s).position.z() >= -1e-12);
  }
}
