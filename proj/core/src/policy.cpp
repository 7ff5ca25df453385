#include "absnav/policy.hpp"

#include <algorithm>
#include <cmath>

#include "absnav/geometry.hpp"

namespace absnav {
namespace {

// Scripted controller constants.
constexpr double kHeadingGain = 2.5;
constexpr double kClearanceGain = 1.2;     // (m/s) per metre of free space
constexpr double kClearanceStandoff = 0.5; // m
constexpr double kGoalSpeedGain = 1.5;     // (m/s) per metre to the goal
constexpr double kSideRange = 1.5;         // m
constexpr double kSideGain = 0.4;

constexpr std::array<double, kAgileObsDim> kObsScale = {
    0.5, 1.0, 1.0 / 3.0, 0.2, 0.2, 1.0 / kPi, 1.0 / 9.0,
    0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};

double squash(double y, double lo, double hi) {
  return lo + 0.5 * (std::tanh(y) + 1.0) * (hi - lo);
}

double unsquash(double c, double lo, double hi, double margin) {
  const double u = std::clamp(2.0 * (c - lo) / (hi - lo) - 1.0, -1.0 + margin, 1.0 - margin);
  return std::atanh(u);
}

}  // namespace

std::array<double, kAgileObsDim> AgileObservation::to_array() const {
  std::array<double, kAgileObsDim> a{};
  a[0] = vx;
  a[1] = vy;
  a[2] = omega;
  a[3] = goal_x;
  a[4] = goal_y;
  a[5] = goal_heading_err;
  a[6] = time_left;
  std::copy(log_rays.begin(), log_rays.end(), a.begin() + 7);
  return a;
}

AgileObservation make_agile_observation(const RobotState& s, const GoalCommand& goal,
                                        const RayDistances& rays, double time_left) {
  const auto g = goal_in_base_frame(s, goal);
  AgileObservation o;
  o.vx = s.vx;
  o.vy = s.vy;
  o.omega = s.omega;
  o.goal_x = g.x;
  o.goal_y = g.y;
  o.goal_heading_err = g.heading_err;
  o.time_left = time_left;
  for (int i = 0; i < kNumRays; ++i) o.log_rays[i] = std::log(rays[i]);
  return o;
}

PolicyParams make_policy(Rng& rng) { return {init_mlp(kPolicyLayerDims, rng), kAgileBox}; }

PolicyParams zero_policy() { return {make_mlp(kPolicyLayerDims), kAgileBox}; }

std::array<double, kAgileObsDim> normalize_observation(const AgileObservation& obs) {
  auto a = obs.to_array();
  for (int i = 0; i < kAgileObsDim; ++i) a[i] *= kObsScale[i];
  return a;
}

TwistCommand policy_forward(const PolicyParams& p, const AgileObservation& obs) {
  const auto x = normalize_observation(obs);
  const Eigen::VectorXd y = forward(p.net, std::span<const double>(x));
  return {squash(y(0), p.box.lo.vx, p.box.hi.vx), squash(y(1), p.box.lo.vy, p.box.hi.vy),
          squash(y(2), p.box.lo.omega, p.box.hi.omega)};
}

std::array<double, 3> unsquash_command(const TwistCommand& c, const CommandBox& box,
                                       double margin) {
  return {unsquash(c.vx, box.lo.vx, box.hi.vx, margin),
          unsquash(c.vy, box.lo.vy, box.hi.vy, margin),
          unsquash(c.omega, box.lo.omega, box.hi.omega, margin)};
}

TwistCommand scripted_policy(const AgileObservation& obs) {
  const double bearing = std::atan2(obs.goal_y, obs.goal_x);
  const double d_goal = std::hypot(obs.goal_x, obs.goal_y);

  // Rays 3..7 cover roughly +-20 degrees around the heading.
  double front = kDefaultMaxRange;
  for (int i = 3; i <= 7; ++i) front = std::min(front, std::exp(obs.log_rays[i]));
  double right = kDefaultMaxRange;
  double left = kDefaultMaxRange;
  for (int i = 0; i < kNumRays / 2; ++i) right = std::min(right, std::exp(obs.log_rays[i]));
  for (int i = kNumRays / 2 + 1; i < kNumRays; ++i) left = std::min(left, std::exp(obs.log_rays[i]));

  const double v_clear = std::max(0.0, kClearanceGain * (front - kClearanceStandoff));
  const double speed = std::min({kAgileBox.hi.vx, v_clear, kGoalSpeedGain * d_goal});

  const double push_right = std::max(0.0, kSideRange - left);
  const double push_left = std::max(0.0, kSideRange - right);

  TwistCommand cmd;
  cmd.vx = speed * std::cos(bearing);
  cmd.vy = kSideGain * (push_left - push_right);
  cmd.omega = kHeadingGain * bearing;
  return kAgileBox.clamp(cmd);
}

}  // namespace absnav
