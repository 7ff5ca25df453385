#pragma once

#include <array>
#include <optional>
#include <span>

#include "absnav/dynamics.hpp"
#include "absnav/mlp.hpp"
#include "absnav/types.hpp"

namespace absnav {

inline constexpr int kAgileObsDim = 18;

/// Agile policy input: base twist, goal in the base frame, time left and the
/// log ray distances.
struct AgileObservation {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double goal_heading_err = 0.0;
  double time_left = 0.0;
  std::array<double, kNumRays> log_rays{};

  [[nodiscard]] std::array<double, kAgileObsDim> to_array() const;
};

/// `rays` are the distances the policy observes (possibly noisy or altered).
[[nodiscard]] AgileObservation make_agile_observation(const RobotState& state,
                                                      const GoalCommand& goal,
                                                      const RayDistances& rays, double time_left);

/// 18 -> 32 -> 32 -> 3 network whose output is tanh-squashed into the agile box.
struct PolicyParams {
  MlpParams net;
  CommandBox box = kAgileBox;
};

inline const std::vector<int> kPolicyLayerDims{kAgileObsDim, 32, 32, 3};

[[nodiscard]] PolicyParams make_policy(Rng& rng);
[[nodiscard]] PolicyParams zero_policy();

/// Fixed per-feature scaling applied before the network.
[[nodiscard]] std::array<double, kAgileObsDim> normalize_observation(const AgileObservation& obs);

[[nodiscard]] TwistCommand policy_forward(const PolicyParams& params, const AgileObservation& obs);

/// Maps a command inside the box back to the pre-squash network output.
/// Entries on the box boundary are pulled in by `margin` of the half-width.
[[nodiscard]] std::array<double, 3> unsquash_command(const TwistCommand& cmd,
                                                     const CommandBox& box,
                                                     double margin = 1e-3);

/// Deterministic pure-pursuit controller with clearance-scaled speed.
[[nodiscard]] TwistCommand scripted_policy(const AgileObservation& obs);

/// Either a trained network or the scripted controller.
class AgilePolicy {
 public:
  AgilePolicy() = default;
  explicit AgilePolicy(PolicyParams params) : params_(std::move(params)) {}

  static AgilePolicy scripted() { return AgilePolicy(); }

  [[nodiscard]] bool is_scripted() const { return !params_.has_value(); }
  [[nodiscard]] const PolicyParams* params() const { return params_ ? &*params_ : nullptr; }

  [[nodiscard]] TwistCommand operator()(const AgileObservation& obs) const {
    return params_ ? policy_forward(*params_, obs) : scripted_policy(obs);
  }

 private:
  std::optional<PolicyParams> params_;
};

}  // namespace absnav
