#include <gtest/gtest.h>

#include <cmath>

#include "absnav/errors.hpp"
#include "absnav/geometry.hpp"
#include "oracles.hpp"

namespace absnav {
namespace {

constexpr int kCenterRay = kNumRays / 2;

TEST(CastRays, CenterRayHitsObstacleOnAxis) {
  const std::vector<Obstacle> obs{{2.0, 0.0, 0.4}};
  const auto d = cast_rays(RobotState{}, obs, 10.0);
  EXPECT_NEAR(d[kCenterRay], 1.6, 1e-12);
}

TEST(CastRays, EmptyWorldClipsToMaxRange) {
  const auto d = cast_rays(RobotState{}, {}, 10.0);
  for (double v : d) EXPECT_EQ(v, 10.0);
}

TEST(CastRays, LeftmostRayHitsDiagonalObstacle) {
  const std::vector<Obstacle> obs{{2.0, 2.0, 0.4}};
  const auto d = cast_rays(RobotState{}, obs, 10.0);
  EXPECT_NEAR(d[kNumRays - 1], 2.0 * std::sqrt(2.0) - 0.4, 1e-12);
  EXPECT_NEAR(d[kNumRays - 1], oracle::march_ray(0, 0, kPi / 4, obs, 10.0), 2e-4);
}

TEST(CastRays, BearingsSpanTheFieldOfView) {
  EXPECT_DOUBLE_EQ(ray_bearing(0), -kPi / 4);
  EXPECT_DOUBLE_EQ(ray_bearing(kNumRays - 1), kPi / 4);
  EXPECT_NEAR(ray_bearing(1) - ray_bearing(0), kPi / 20, 1e-15);
}

TEST(CastRays, TangentRayHitsAtTangentPoint) {
  // Center ray along +x grazes a circle of radius 0.4 centred at (3, 0.4).
  const std::vector<Obstacle> obs{{3.0, 0.4, 0.4}};
  const auto d = cast_rays(RobotState{}, obs, 10.0);
  EXPECT_NEAR(d[kCenterRay], 3.0, 1e-9);
}

TEST(CastRays, ObstacleBehindIsIgnored) {
  const std::vector<Obstacle> obs{{-2.0, 0.0, 0.4}};
  const auto d = cast_rays(RobotState{}, obs, 10.0);
  EXPECT_EQ(d[kCenterRay], 10.0);
}

TEST(CastRays, NearestOfSeveralObstacles) {
  const std::vector<Obstacle> obs{{5.0, 0.0, 0.4}, {2.0, 0.0, 0.4}};
  EXPECT_NEAR(cast_rays(RobotState{}, obs, 10.0)[kCenterRay], 1.6, 1e-12);
}

TEST(CastRays, RotationEquivariant) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto scene = oracle::random_scene(rng);
    const double phi = uniform(rng, -kPi, kPi);
    const double c = std::cos(phi), s = std::sin(phi);
    RobotState r = scene.robot;
    r.x = c * scene.robot.x - s * scene.robot.y;
    r.y = s * scene.robot.x + c * scene.robot.y;
    r.theta = wrap_angle(scene.robot.theta + phi);
    std::vector<Obstacle> rotated;
    for (const auto& o : scene.obstacles)
      rotated.push_back({c * o.cx - s * o.cy, s * o.cx + c * o.cy, o.radius});
    const auto a = cast_rays(scene.robot, scene.obstacles);
    const auto b = cast_rays(r, rotated);
    for (int i = 0; i < kNumRays; ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(CastRays, AgreesWithRayMarching) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto scene = oracle::random_scene(rng);
    const auto d = cast_rays(scene.robot, scene.obstacles, kDefaultMaxRange);
    for (int i = 0; i < kNumRays; ++i) {
      const double m = oracle::march_ray(scene.robot.x, scene.robot.y,
                                         scene.robot.theta + ray_bearing(i), scene.obstacles,
                                         kDefaultMaxRange);
      ASSERT_NEAR(d[i], m, 1e-3) << "trial " << trial << " ray " << i;
    }
  }
}

TEST(RayCircle, MissReturnsInfinity) {
  EXPECT_TRUE(std::isinf(ray_circle_distance(0, 0, 1, 0, {0.0, 2.0, 0.4})));
}

TEST(RayCircle, OriginInsideReturnsExitDistance) {
  EXPECT_NEAR(ray_circle_distance(0, 0, 1, 0, {0.1, 0.0, 0.4}), 0.5, 1e-12);
}

TEST(Illusion, BoundaryEntryUnchanged) {
  Rng rng = make_rng(1);
  RayDistances d;
  d.fill(1.0 + 0.3);
  EXPECT_EQ(apply_illusion(d, 1.0, rng), d);
}

TEST(Illusion, ShortEntriesUnchanged) {
  Rng rng = make_rng(2);
  RayDistances d{};
  for (int i = 0; i < kNumRays; ++i) d[i] = 0.1 * (i + 1);
  EXPECT_EQ(apply_illusion(d, 1.5, rng), d);
}

TEST(Illusion, LongEntriesResampledWithinSupport) {
  Rng rng = make_rng(4);
  const double d_goal = 1.0;
  RayDistances d;
  d.fill(d_goal + 2.0);
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k < 10000; ++k) {
    const auto out = apply_illusion(d, d_goal, rng);
    for (double v : out) {
      ASSERT_GE(v, d_goal + 0.3);
      ASSERT_LE(v, d_goal + 2.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_LT(lo, d_goal + 0.35);
  EXPECT_GT(hi, d_goal + 1.95);
}

TEST(Illusion, MixedEntriesOnlyLongOnesChange) {
  Rng rng = make_rng(5);
  RayDistances d{};
  for (int i = 0; i < kNumRays; ++i) d[i] = i % 2 ? 0.5 : 9.0;
  const auto out = apply_illusion(d, 1.0, rng);
  for (int i = 0; i < kNumRays; ++i) {
    if (i % 2) EXPECT_EQ(out[i], d[i]);
    else EXPECT_LE(out[i], d[i]);
  }
}

TEST(Collision, Examples) {
  const std::vector<Obstacle> obs{{1.0, 0.0, 0.4}};
  RobotState s;
  EXPECT_FALSE(check_collision(s, obs, 0.3));
  s.x = 0.6;
  EXPECT_TRUE(check_collision(s, obs, 0.3));
}

TEST(Collision, ExactContactIsNotACollision) {
  const std::vector<Obstacle> obs{{0.75, 0.0, 0.5}};
  RobotState s;
  EXPECT_FALSE(check_collision(s, obs, 0.25));
  s.x = 1e-12;
  EXPECT_TRUE(check_collision(s, obs, 0.25));
}

TEST(SampleWorld, TestModeHasEightObstaclesInRect) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto w = sample_world(WorldMode::kTest, seed);
    ASSERT_EQ(w.obstacles.size(), 8u);
    for (const auto& o : w.obstacles) EXPECT_TRUE(kTestRect.contains(o.cx, o.cy));
  }
  EXPECT_DOUBLE_EQ(kTestRect.width(), 5.5);
  EXPECT_DOUBLE_EQ(kTestRect.height(), 4.0);
}

TEST(SampleWorld, TrainModeGoalHeadingNearBearing) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto w = sample_world(WorldMode::kTrain, seed);
    EXPECT_LE(w.obstacles.size(), 8u);
    EXPECT_LE(std::abs(wrap_angle(w.goal.heading - std::atan2(w.goal.y, w.goal.x))), 0.3 + 1e-12);
    EXPECT_GE(w.goal.x, 1.5);
    EXPECT_LT(w.goal.x, 7.5);
    EXPECT_GE(w.goal.y, -2.0);
    EXPECT_LT(w.goal.y, 2.0);
  }
}

TEST(SampleWorld, TrainModeUsesEveryObstacleCount) {
  std::vector<int> seen(9, 0);
  for (std::uint64_t seed = 0; seed < 900; ++seed)
    ++seen[sample_world(WorldMode::kTrain, seed).obstacles.size()];
  for (int c : seen) EXPECT_GT(c, 0);
}

TEST(SampleWorld, ClearanceFromSpawnAndGoal) {
  const double clear = kObstacleRadius + kRobotRadius + kClearanceMargin;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto mode = seed % 2 ? WorldMode::kTrain : WorldMode::kTest;
    const auto w = sample_world(mode, seed);
    for (const auto& o : w.obstacles) {
      ASSERT_GE(std::hypot(o.cx, o.cy), clear);
      ASSERT_GE(std::hypot(o.cx - w.goal.x, o.cy - w.goal.y), clear);
    }
  }
}

TEST(SampleWorld, Reproducible) {
  EXPECT_EQ(sample_world(WorldMode::kTest, 77), sample_world(WorldMode::kTest, 77));
  EXPECT_EQ(sample_world(WorldMode::kTrain, 77), sample_world(WorldMode::kTrain, 77));
  EXPECT_NE(sample_world(WorldMode::kTest, 77), sample_world(WorldMode::kTest, 78));
}

TEST(SampleObstacles, ImpossibleClearanceThrows) {
  Rng rng = make_rng(0);
  const Rect tiny{-0.1, 0.1, -0.1, 0.1};
  EXPECT_THROW((void)sample_obstacles(1, tiny, GoalCommand{5, 0, 0}, rng), SamplingExhausted);
}

}  // namespace
}  // namespace absnav
