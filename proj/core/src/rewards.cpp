#include "absnav/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "absnav/dynamics.hpp"
#include "absnav/errors.hpp"

namespace absnav {

void validate(const RewardConfig& c) {
  const double positive[] = {c.sigma_soft,  c.sigma_tight, c.sigma_heading, c.t_r_pos_soft,
                             c.t_r_pos_tight, c.t_r_heading, c.v_max,       c.w_possoft,
                             c.w_postight,  c.w_heading,   c.w_agile,       c.w_stall,
                             c.w_penalty,   c.agile_scale};
  for (double v : positive) {
    if (!(v > 0.0)) throw ConfigError("rewards: sigmas, windows, v_max and weights must be positive");
  }
  if (c.w_smooth < 0.0) throw ConfigError("rewards: w_smooth must be non-negative");
}

double agile_scale(Variant v) {
  switch (v) {
    case Variant::kAggressive: return 2.0;
    case Variant::kNominal: return 1.0;
    case Variant::kConservative: return 0.5;
  }
  return 1.0;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kAggressive: return "aggressive";
    case Variant::kNominal: return "nominal";
    case Variant::kConservative: return "conservative";
  }
  return "nominal";
}

Variant parse_variant(std::string_view name) {
  if (name == "aggressive") return Variant::kAggressive;
  if (name == "nominal") return Variant::kNominal;
  if (name == "conservative") return Variant::kConservative;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

RewardConfig with_variant(RewardConfig cfg, Variant v) {
  cfg.agile_scale = agile_scale(v);
  return cfg;
}

double tracking_reward(double error, double sigma, double t, double horizon, double t_r) {
  if (!(t > horizon - t_r)) return 0.0;
  const double e = error / sigma;
  return 1.0 / (1.0 + e * e) / t_r;
}

double goal_direction_angle(const RobotState& state, const GoalCommand& goal) {
  const auto g = goal_in_base_frame(state, goal);
  return std::abs(std::atan2(g.y, g.x));
}

double agile_reward(const RobotState& state, const GoalCommand& goal, const RewardConfig& cfg) {
  const bool facing = goal_direction_angle(state, goal) < cfg.correct_direction;
  const double run = facing ? std::max(0.0, state.vx / cfg.v_max) : 0.0;
  const double at_goal = goal_distance(state, goal) < cfg.sigma_tight ? 1.0 : 0.0;
  return std::max(run, at_goal);
}

double stall_reward(const RobotState& state, const GoalCommand& goal, const RewardConfig& cfg) {
  const bool stalled = planar_speed(state) < cfg.stall_speed;
  const bool far = goal_distance(state, goal) > cfg.sigma_soft;
  const bool facing = goal_direction_angle(state, goal) < cfg.correct_direction;
  return (stalled && far && !facing) ? 1.0 : 0.0;
}

RewardTerms step_reward(const RobotState& state, const GoalCommand& goal, const TwistCommand& cmd,
                        const TwistCommand& prev_cmd, double t, double horizon, bool collided,
                        const RewardConfig& cfg) {
  const double d_goal = goal_distance(state, goal);
  RewardTerms r;
  r.possoft = cfg.w_possoft * tracking_reward(d_goal, cfg.sigma_soft, t, horizon, cfg.t_r_pos_soft);
  r.postight =
      cfg.w_postight * tracking_reward(d_goal, cfg.sigma_tight, t, horizon, cfg.t_r_pos_tight);
  if (d_goal <= cfg.sigma_soft) {
    const double heading_err = wrap_angle(goal.heading - state.theta);
    r.heading = cfg.w_heading *
                tracking_reward(heading_err, cfg.sigma_heading, t, horizon, cfg.t_r_heading);
  }
  r.agile = cfg.agile_scale * cfg.w_agile * agile_reward(state, goal, cfg);
  r.stall = -cfg.w_stall * stall_reward(state, goal, cfg);
  r.penalty = collided ? -cfg.w_penalty : 0.0;
  const double dvx = cmd.vx - prev_cmd.vx;
  const double dvy = cmd.vy - prev_cmd.vy;
  const double dw = cmd.omega - prev_cmd.omega;
  r.smooth = -cfg.w_smooth * (dvx * dvx + dvy * dvy + dw * dw);
  return r;
}

}  // namespace absnav
