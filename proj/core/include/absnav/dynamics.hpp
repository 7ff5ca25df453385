#pragma once

#include "absnav/types.hpp"

namespace absnav {

/// First-order, rate-limited twist tracking with Euler pose integration.
struct DynamicsConfig {
  double dt = 0.02;          ///< control and integration step (s)
  double tau_tw = 0.2;       ///< twist time constant (s)
  double a_max = 6.0;        ///< linear acceleration limit (m/s^2)
  double alpha_max = 15.0;   ///< angular acceleration limit (rad/s^2)
};

/// Hard physical twist limits applied after every step.
inline constexpr double kMaxAbsVx = 5.0;
inline constexpr double kMaxAbsVy = 1.5;
inline constexpr double kMaxAbsOmega = 7.0;

/// Throws ConfigError unless every field is positive and dt <= tau_tw.
void validate(const DynamicsConfig& cfg);

/// Advances one control tick. The pose integrates the pre-step twist (explicit
/// Euler); the twist then moves toward the command at a clamped rate.
[[nodiscard]] RobotState step(const RobotState& state, const TwistCommand& cmd,
                              const DynamicsConfig& cfg);

struct GoalInBase {
  double x = 0.0;
  double y = 0.0;
  double heading_err = 0.0;
};

/// World-frame goal expressed in the robot base frame.
[[nodiscard]] GoalInBase goal_in_base_frame(const RobotState& state, const GoalCommand& goal);

/// Inverse of goal_in_base_frame.
[[nodiscard]] GoalCommand goal_in_world_frame(const RobotState& state, const GoalInBase& g);

[[nodiscard]] inline double planar_speed(const RobotState& s) { return std::hypot(s.vx, s.vy); }

[[nodiscard]] inline double goal_distance(const RobotState& s, const GoalCommand& g) {
  return std::hypot(g.x - s.x, g.y - s.y);
}

}  // namespace absnav
