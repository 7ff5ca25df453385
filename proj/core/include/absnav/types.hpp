#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace absnav {

inline constexpr double kPi = std::numbers::pi;

/// Number of exteroceptive rays, evenly spaced over [-pi/4, pi/4].
inline constexpr int kNumRays = 11;
inline constexpr double kRayHalfFov = kPi / 4.0;

/// Ray distances in metres, index 0 is the rightmost ray (-pi/4).
using RayDistances = std::array<double, kNumRays>;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * kPi;
  double w = a - two_pi * std::ceil((a - kPi) / two_pi);
  // ceil() can land one period off when (a - pi) / 2pi rounds across an integer.
  if (w <= -kPi) w += two_pi;
  if (w > kPi) w -= two_pi;
  return w;
}

/// Planar robot state. Pose in the world frame, twist in the base frame.
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

/// Base-frame twist command [v_x, v_y, omega_z]; the remaining components of
/// the 6-d twist are always zero for a planar robot.
struct TwistCommand {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  friend bool operator==(const TwistCommand&, const TwistCommand&) = default;
};

/// Axis-aligned box of admissible twist commands.
struct CommandBox {
  TwistCommand lo;
  TwistCommand hi;

  [[nodiscard]] bool contains(const TwistCommand& c) const {
    return c.vx >= lo.vx && c.vx <= hi.vx && c.vy >= lo.vy && c.vy <= hi.vy &&
           c.omega >= lo.omega && c.omega <= hi.omega;
  }

  [[nodiscard]] TwistCommand clamp(const TwistCommand& c) const {
    return {std::clamp(c.vx, lo.vx, hi.vx), std::clamp(c.vy, lo.vy, hi.vy),
            std::clamp(c.omega, lo.omega, hi.omega)};
  }

  [[nodiscard]] TwistCommand center() const {
    return {0.5 * (lo.vx + hi.vx), 0.5 * (lo.vy + hi.vy), 0.5 * (lo.omega + hi.omega)};
  }
};

/// Command box of the agile policy.
inline constexpr CommandBox kAgileBox{{-1.0, -1.0, -6.0}, {4.5, 1.0, 6.0}};

/// Command box of the recovery policy.
inline constexpr CommandBox kRecoveryBox{{-1.5, -0.3, -3.0}, {1.5, 0.3, 3.0}};

/// Goal pose in the world frame.
struct GoalCommand {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  friend bool operator==(const GoalCommand&, const GoalCommand&) = default;
};

}  // namespace absnav
