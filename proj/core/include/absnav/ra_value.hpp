#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "absnav/types.hpp"

namespace absnav {

inline constexpr int kRaObsDim = 16;
inline constexpr double kGammaRa = 0.999999;
inline const std::vector<int> kRaLayerDims{kRaObsDim, 64, 64, 1};

/// Reach-avoid value input: base twist, goal position in the base frame and
/// log ray distances.
struct RAObservation {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  double goal_x = 0.0;
  double goal_y = 0.0;
  std::array<double, kNumRays> log_rays{};

  [[nodiscard]] std::array<double, kRaObsDim> to_array() const;
  [[nodiscard]] static RAObservation from_array(std::span<const double> a);
};

[[nodiscard]] RAObservation make_ra_observation(const RobotState& state, const GoalCommand& goal,
                                                const RayDistances& rays);

/// Copy of `obs` with its twist replaced by `twist`.
[[nodiscard]] RAObservation with_twist(RAObservation obs, const TwistCommand& twist);

inline constexpr double kMinGoalDistance = 1e-6;

/// Target margin tanh(log(d_goal / sigma_tight)); non-positive iff reached.
[[nodiscard]] double l_margin(double d_goal, double sigma_tight);

/// Failure margin: +1 on collision, -1 otherwise.
[[nodiscard]] double zeta_raw(bool collided);

/// Hindsight ramp assigned to the last ten steps up to and including a collision.
inline constexpr std::array<double, 10> kZetaRamp{-0.8, -0.6, -0.4, -0.2, 0.0,
                                                  0.2,  0.4,  0.6,  0.8,  1.0};

/// Relabels the ten steps ending at the collision (the entry equal to +1) with
/// kZetaRamp, truncating the ramp on the left when fewer steps exist. Sequences
/// without a collision are returned unchanged.
[[nodiscard]] std::vector<double> soften_zeta(std::span<const double> zeta);

/// gamma * max{zeta, min{l, v_next}} + (1 - gamma) * max{l, zeta}. A missing
/// v_next denotes a terminal successor whose value is +inf, which collapses the
/// target to max{l, zeta}. gamma = 1 gives the undiscounted fixed-point form.
[[nodiscard]] double bellman_target(double l, double zeta, std::optional<double> v_next,
                                    double gamma);

struct RaValues {
  std::vector<double> v_star;   ///< undiscounted reach-avoid value
  std::vector<double> v_gamma;  ///< time-discounted value
};

/// Exact backward recursions over one finite trajectory whose last entry is
/// terminal.
[[nodiscard]] RaValues backward_recursion(std::span<const double> l, std::span<const double> zeta,
                                          double gamma);

}  // namespace absnav
