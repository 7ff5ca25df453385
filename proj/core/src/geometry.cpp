#include "absnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absnav/errors.hpp"

namespace absnav {

double ray_circle_distance(double px, double py, double dx, double dy,
                           const Obstacle& obstacle) {
  // |p + t d - c|^2 = r^2 with |d| = 1:  t^2 + 2 b t + k = 0.
  const double fx = px - obstacle.cx;
  const double fy = py - obstacle.cy;
  const double b = fx * dx + fy * dy;
  const double k = fx * fx + fy * fy - obstacle.radius * obstacle.radius;
  const double disc = b * b - k;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double root = std::sqrt(disc);
  const double near = -b - root;
  if (near >= 0.0) return near;
  const double far = -b + root;
  if (far >= 0.0) return far;
  return std::numeric_limits<double>::infinity();
}

RayDistances cast_rays(const RobotState& state, std::span<const Obstacle> obstacles,
                       double d_max) {
  RayDistances out;
  for (int i = 0; i < kNumRays; ++i) {
    const double angle = state.theta + ray_bearing(i);
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double best = d_max;
    for (const auto& obs : obstacles) {
      best = std::min(best, ray_circle_distance(state.x, state.y, dx, dy, obs));
    }
    out[i] = best;
  }
  return out;
}

RayDistances apply_illusion(const RayDistances& distances, double d_goal, Rng& rng) {
  const double floor = d_goal + 0.3;
  RayDistances out = distances;
  for (auto& d : out) {
    if (d > floor) d = uniform(rng, floor, d);
  }
  return out;
}

bool check_collision(const RobotState& state, std::span<const Obstacle> obstacles,
                     double r_robot) {
  return std::any_of(obstacles.begin(), obstacles.end(), [&](const Obstacle& o) {
    return std::hypot(o.cx - state.x, o.cy - state.y) < o.radius + r_robot;
  });
}

GoalCommand sample_goal(Rng& rng) {
  GoalCommand g;
  g.x = uniform(rng, 1.5, 7.5);
  g.y = uniform(rng, -2.0, 2.0);
  g.heading = wrap_angle(std::atan2(g.y, g.x) + uniform(rng, -0.3, 0.3));
  return g;
}

std::vector<Obstacle> sample_obstacles(int count, const Rect& rect, const GoalCommand& goal,
                                       Rng& rng) {
  const double clearance = kObstacleRadius + kRobotRadius + kClearanceMargin;
  std::vector<Obstacle> obstacles;
  obstacles.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
      const double cx = uniform(rng, rect.x_min, rect.x_max);
      const double cy = uniform(rng, rect.y_min, rect.y_max);
      if (std::hypot(cx, cy) < clearance) continue;
      if (std::hypot(cx - goal.x, cy - goal.y) < clearance) continue;
      obstacles.push_back({cx, cy, kObstacleRadius});
      placed = true;
      break;
    }
    if (!placed) {
      throw SamplingExhausted("could not place obstacle " + std::to_string(i) + " after " +
                              std::to_string(kMaxSamplingAttempts) + " attempts");
    }
  }
  return obstacles;
}

WorldConfig sample_world(WorldMode mode, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  WorldConfig world;
  world.rng_seed = seed;
  world.goal = sample_goal(rng);
  if (mode == WorldMode::kTrain) {
    world.spawn_rect = kTrainRect;
    const int count = uniform_int(rng, 0, 8);
    world.obstacles = sample_obstacles(count, kTrainRect, world.goal, rng);
  } else {
    world.spawn_rect = kTestRect;
    world.obstacles = sample_obstacles(8, kTestRect, world.goal, rng);
  }
  return world;
}

}  // namespace absnav
