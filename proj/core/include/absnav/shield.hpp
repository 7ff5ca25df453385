#pragma once

#include <vector>

#include "absnav/mlp.hpp"
#include "absnav/ra_value.hpp"
#include "absnav/types.hpp"

namespace absnav {

struct ShieldConfig {
  double v_threshold = -0.05;
  double delta_t = 0.05;     // s, look-ahead for the goal-distance objective
  int max_grad_steps = 5;
  double step_size = 0.2;    // fraction of the box width per step
  double lagrange = 5.0;
  CommandBox box = kRecoveryBox;
  /// Once in recovery, the robot returns to agile only below
  /// v_threshold - hysteresis.
  double hysteresis = 0.0;
  /// With no feasible iterate, command a full stop instead of the
  /// smallest-value iterate.
  bool stop_when_infeasible = false;
};

void validate(const ShieldConfig& cfg);

enum class Mode { kAgile, kRecovery };

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

/// Base-frame displacement after tracking `tw` for `delta_t`, to second order.
[[nodiscard]] Displacement linearized_displacement(const TwistCommand& tw, double delta_t);

/// Distance to the goal (base frame) after the linearized displacement.
[[nodiscard]] double future_goal_distance(const TwistCommand& tw, double goal_x, double goal_y,
                                          double delta_t);

struct TwistIterate {
  TwistCommand twist;
  double v_hat = 0.0;
  double goal_distance = 0.0;
  double objective = 0.0;  ///< goal_distance + lagrange * ReLU(v_hat - v_threshold)
  [[nodiscard]] bool feasible(double v_threshold) const { return v_hat < v_threshold; }
};

struct TwistSearch {
  TwistCommand twist;
  bool feasible = false;
  std::vector<TwistIterate> iterates;
};

/// Lagrangian objective at one twist, with the value network evaluated at
/// `obs` carrying that twist.
[[nodiscard]] TwistIterate evaluate_twist(const TwistCommand& tw, const RAObservation& obs,
                                          const MlpParams& value_net, const ShieldConfig& cfg);

/// Projected, box-scaled gradient descent on the Lagrangian, started from the
/// current twist (obs's twist) clamped into the box. Returns the feasible
/// iterate closest to the goal, or the iterate with the smallest value when
/// none is feasible (a zero twist if cfg.stop_when_infeasible). Ties keep the
/// earliest iterate.
[[nodiscard]] TwistSearch optimize_twist(const RAObservation& obs, const MlpParams& value_net,
                                         const ShieldConfig& cfg);

struct ModeDecision {
  Mode mode = Mode::kAgile;
  double v_hat = 0.0;
  TwistCommand command;
  std::vector<TwistIterate> iterates;
};

/// Policy switch: agile below the threshold, recovery otherwise.
[[nodiscard]] ModeDecision govern(const RAObservation& obs, const MlpParams& value_net,
                                  const TwistCommand& agile_cmd, const ShieldConfig& cfg,
                                  Mode previous = Mode::kAgile);

/// The recovery controller is an ideal tracker: the command passes through to
/// the rate-limited dynamics. Throws BoxViolation outside the recovery box.
[[nodiscard]] TwistCommand recovery_track(const TwistCommand& cmd, const ShieldConfig& cfg);

}  // namespace absnav
