#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "absnav/random.hpp"
#include "absnav/types.hpp"

namespace absnav {

inline constexpr double kDefaultMaxRange = 10.0;
inline constexpr double kRobotRadius = 0.3;
inline constexpr double kObstacleRadius = 0.4;
/// Extra spacing beyond contact required between sampled obstacles and the
/// spawn point or the goal.
inline constexpr double kClearanceMargin = 0.1;
inline constexpr int kMaxSamplingAttempts = 1000;

/// Vertical cylinder seen from above.
struct Obstacle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = kObstacleRadius;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  [[nodiscard]] bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  [[nodiscard]] double width() const { return x_max - x_min; }
  [[nodiscard]] double height() const { return y_max - y_min; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Training worlds: 0..8 obstacles in an 11 m x 5 m rectangle covering the
/// origin and every admissible goal.
inline constexpr Rect kTrainRect{-2.0, 9.0, -2.5, 2.5};
/// Test worlds: exactly 8 obstacles in a 5.5 m x 4 m rectangle between the
/// spawn point and the goal region.
inline constexpr Rect kTestRect{1.0, 6.5, -2.0, 2.0};

enum class WorldMode { kTrain, kTest };

struct WorldConfig {
  std::vector<Obstacle> obstacles;
  GoalCommand goal;
  Rect spawn_rect;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

/// Bearing of ray `i` relative to the robot heading.
[[nodiscard]] inline double ray_bearing(int i) {
  return -kRayHalfFov + i * (2.0 * kRayHalfFov / (kNumRays - 1));
}

/// Distance along a unit ray from (px, py) to the first intersection with a
/// circle, or +inf when the ray misses. A tangent ray hits at the tangent
/// point. Origins inside the circle return the exit distance.
[[nodiscard]] double ray_circle_distance(double px, double py, double dx, double dy,
                                         const Obstacle& obstacle);

/// Analytic ray casting against cylinders. Distances are clipped to d_max.
[[nodiscard]] RayDistances cast_rays(const RobotState& state,
                                     std::span<const Obstacle> obstacles,
                                     double d_max = kDefaultMaxRange);

/// Training-time illusion: entries longer than d_goal + 0.3 are overwritten by
/// a draw from U(d_goal + 0.3, entry).
[[nodiscard]] RayDistances apply_illusion(const RayDistances& distances, double d_goal,
                                          Rng& rng);

/// True iff the robot disc of radius r_robot overlaps an obstacle (strict).
[[nodiscard]] bool check_collision(const RobotState& state,
                                   std::span<const Obstacle> obstacles,
                                   double r_robot = kRobotRadius);

/// Goal sampled as x ~ U(1.5, 7.5), y ~ U(-2, 2), heading = atan2(y, x) + U(-0.3, 0.3).
[[nodiscard]] GoalCommand sample_goal(Rng& rng);

/// Samples a world. Reproducible: the same (mode, seed) yields the same world.
/// Throws SamplingExhausted if an obstacle cannot be placed with clearance in
/// kMaxSamplingAttempts draws.
[[nodiscard]] WorldConfig sample_world(WorldMode mode, std::uint64_t seed);

/// Places obstacles uniformly in `rect` with clearance from the origin and the
/// goal. Exposed for constructing custom worlds.
[[nodiscard]] std::vector<Obstacle> sample_obstacles(int count, const Rect& rect,
                                                     const GoalCommand& goal, Rng& rng);

}  // namespace absnav
