#pragma once

#include <string>
#include <string_view>

#include "absnav/types.hpp"

namespace absnav {

/// Agile-task reward weights and shaping constants.
struct RewardConfig {
  double sigma_soft = 2.0;      // m
  double sigma_tight = 0.5;     // m
  double sigma_heading = 1.0;   // rad
  double t_r_pos_soft = 2.0;    // s
  double t_r_pos_tight = 1.0;   // s
  double t_r_heading = 2.0;     // s
  double v_max = 4.5;           // m/s
  double w_possoft = 60.0;
  double w_postight = 60.0;
  double w_heading = 30.0;
  double w_agile = 10.0;
  double w_stall = 20.0;
  double w_penalty = 100.0;
  double agile_scale = 1.0;
  double w_smooth = 0.01;
  double stall_speed = 0.1;                          // m/s
  double correct_direction = 105.0 * kPi / 180.0;    // rad
};

void validate(const RewardConfig& cfg);

/// Training variants differ only in the scale of the agile term.
enum class Variant { kAggressive, kNominal, kConservative };

[[nodiscard]] double agile_scale(Variant v);
[[nodiscard]] std::string_view to_string(Variant v);
/// Throws ConfigError on an unknown name.
[[nodiscard]] Variant parse_variant(std::string_view name);

[[nodiscard]] RewardConfig with_variant(RewardConfig cfg, Variant v);

/// Weighted per-step contributions; total() is the step reward.
struct RewardTerms {
  double possoft = 0.0;
  double postight = 0.0;
  double heading = 0.0;
  double agile = 0.0;
  double stall = 0.0;     ///< already negative
  double penalty = 0.0;   ///< already negative
  double smooth = 0.0;    ///< already negative

  [[nodiscard]] double total() const {
    return possoft + postight + heading + agile + stall + penalty + smooth;
  }
};

/// 1 / (1 + (error / sigma)^2) * 1(t > T - T_r) / T_r
[[nodiscard]] double tracking_reward(double error, double sigma, double t, double horizon,
                                     double t_r);

/// Angle between the base heading and the robot-to-goal line, in [0, pi].
[[nodiscard]] double goal_direction_angle(const RobotState& state, const GoalCommand& goal);

/// max{ReLU(v_x / v_max) * 1(correct direction), 1(d_goal < sigma_tight)}
[[nodiscard]] double agile_reward(const RobotState& state, const GoalCommand& goal,
                                  const RewardConfig& cfg);

/// 1 iff the robot is static, far from the goal and not facing it.
[[nodiscard]] double stall_reward(const RobotState& state, const GoalCommand& goal,
                                  const RewardConfig& cfg);

[[nodiscard]] RewardTerms step_reward(const RobotState& state, const GoalCommand& goal,
                                      const TwistCommand& cmd, const TwistCommand& prev_cmd,
                                      double t, double horizon, bool collided,
                                      const RewardConfig& cfg);

}  // namespace absnav
