#include "absnav/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "absnav/errors.hpp"

namespace absnav {
namespace {

double track(double v, double cmd, double tau, double limit, double dt) {
  const double rate = std::clamp((cmd - v) / tau, -limit, limit);
  return v + rate * dt;
}

}  // namespace

void validate(const DynamicsConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.tau_tw > 0.0 && cfg.a_max > 0.0 && cfg.alpha_max > 0.0)) {
    throw ConfigError("dynamics: dt, tau_tw, a_max and alpha_max must be positive");
  }
  if (cfg.dt > cfg.tau_tw) throw ConfigError("dynamics: dt must not exceed tau_tw");
}

RobotState step(const RobotState& s, const TwistCommand& cmd, const DynamicsConfig& cfg) {
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  RobotState next;
  next.x = s.x + cfg.dt * (s.vx * c - s.vy * sn);
  next.y = s.y + cfg.dt * (s.vx * sn + s.vy * c);
  next.theta = wrap_angle(s.theta + cfg.dt * s.omega);

  next.vx = track(s.vx, cmd.vx, cfg.tau_tw, cfg.a_max, cfg.dt);
  next.vy = track(s.vy, cmd.vy, cfg.tau_tw, cfg.a_max, cfg.dt);
  next.omega = track(s.omega, cmd.omega, cfg.tau_tw, cfg.alpha_max, cfg.dt);

  next.vx = std::clamp(next.vx, -kMaxAbsVx, kMaxAbsVx);
  next.vy = std::clamp(next.vy, -kMaxAbsVy, kMaxAbsVy);
  next.omega = std::clamp(next.omega, -kMaxAbsOmega, kMaxAbsOmega);
  return next;
}

GoalInBase goal_in_base_frame(const RobotState& s, const GoalCommand& goal) {
  const double dx = goal.x - s.x;
  const double dy = goal.y - s.y;
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  return {c * dx + sn * dy, -sn * dx + c * dy, wrap_angle(goal.heading - s.theta)};
}

GoalCommand goal_in_world_frame(const RobotState& s, const GoalInBase& g) {
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  return {s.x + c * g.x - sn * g.y, s.y + sn * g.x + c * g.y,
          wrap_angle(g.heading_err + s.theta)};
}

}  // namespace absnav
