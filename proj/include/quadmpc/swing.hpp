#pragma once

#include "quadmpc/geometry.hpp"

namespace quadmpc {

// Touchdown target from the linear-inverted-pendulum heuristic: neutral
// point half a stance ahead plus a proportional speed-error correction,
// applied per horizontal axis. The step offset is clamped to max_step.
Vec3 raibert_foot_placement(const Eigen::Vector2d& vel,
                            const Eigen::Vector2d& vel_ref, double stance_time,
                            double gain, const Vec3& hip_world,
                            double ground_height, double max_step = 0.3);

struct SwingSample {
  Vec3 position;
  Vec3 velocity;      // per unit phase unless a duration is supplied
  Vec3 acceleration;
};

// Composite swing curve over phase s in [0, 1]: horizontal coordinates follow
// a cubic Bezier with doubled endpoints (zero end velocities); the vertical
// coordinate follows two chained Bezier arcs through ground + apex_height at
// s = 0.5, position- and velocity-continuous at the junction.
// If duration > 0, velocity/acceleration are time derivatives.
class SwingTrajectory {
 public:
  SwingTrajectory(const Vec3& start, const Vec3& foothold, double apex_height,
                  double ground_height);

  // Throws std::domain_error if s is outside [0, 1].
  SwingSample eval(double s, double duration = 0.0) const;

  const Vec3& start() const { return start_; }
  const Vec3& foothold() const { return end_; }

 private:
  Vec3 start_;
  Vec3 end_;
  double apex_z_;
};

}  // namespace quadmpc
