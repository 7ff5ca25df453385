#include "absnav/ra_value.hpp"

#include <algorithm>
#include <cmath>

#include "absnav/dynamics.hpp"
#include "absnav/errors.hpp"

namespace absnav {

std::array<double, kRaObsDim> RAObservation::to_array() const {
  std::array<double, kRaObsDim> a{};
  a[0] = vx;
  a[1] = vy;
  a[2] = omega;
  a[3] = goal_x;
  a[4] = goal_y;
  std::copy(log_rays.begin(), log_rays.end(), a.begin() + 5);
  return a;
}

RAObservation RAObservation::from_array(std::span<const double> a) {
  if (a.size() != kRaObsDim) throw DimensionMismatch("RA observation needs 16 entries");
  RAObservation o;
  o.vx = a[0];
  o.vy = a[1];
  o.omega = a[2];
  o.goal_x = a[3];
  o.goal_y = a[4];
  std::copy(a.begin() + 5, a.end(), o.log_rays.begin());
  return o;
}

RAObservation make_ra_observation(const RobotState& s, const GoalCommand& goal,
                                  const RayDistances& rays) {
  const auto g = goal_in_base_frame(s, goal);
  RAObservation o;
  o.vx = s.vx;
  o.vy = s.vy;
  o.omega = s.omega;
  o.goal_x = g.x;
  o.goal_y = g.y;
  for (int i = 0; i < kNumRays; ++i) o.log_rays[i] = std::log(rays[i]);
  return o;
}

RAObservation with_twist(RAObservation obs, const TwistCommand& t) {
  obs.vx = t.vx;
  obs.vy = t.vy;
  obs.omega = t.omega;
  return obs;
}

double l_margin(double d_goal, double sigma_tight) {
  return std::tanh(std::log(std::max(d_goal, kMinGoalDistance) / sigma_tight));
}

double zeta_raw(bool collided) { return collided ? 1.0 : -1.0; }

std::vector<double> soften_zeta(std::span<const double> zeta) {
  std::vector<double> out(zeta.begin(), zeta.end());
  const auto it = std::find_if(zeta.begin(), zeta.end(), [](double z) { return z > 0.0; });
  if (it == zeta.end()) return out;
  const auto k = static_cast<std::ptrdiff_t>(it - zeta.begin());
  const auto ramp = static_cast<std::ptrdiff_t>(kZetaRamp.size());
  for (std::ptrdiff_t j = 0; j < ramp; ++j) {
    const std::ptrdiff_t idx = k - (ramp - 1) + j;
    if (idx >= 0) out[static_cast<std::size_t>(idx)] = kZetaRamp[static_cast<std::size_t>(j)];
  }
  return out;
}

double bellman_target(double l, double zeta, std::optional<double> v_next, double gamma) {
  const double reach_avoid = v_next ? std::max(zeta, std::min(l, *v_next)) : std::max(zeta, l);
  return gamma * reach_avoid + (1.0 - gamma) * std::max(l, zeta);
}

RaValues backward_recursion(std::span<const double> l, std::span<const double> zeta,
                            double gamma) {
  if (l.size() != zeta.size()) throw DimensionMismatch("l and zeta sequences differ in length");
  RaValues v;
  const std::size_t n = l.size();
  v.v_star.resize(n);
  v.v_gamma.resize(n);
  if (n == 0) return v;
  v.v_star[n - 1] = std::max(l[n - 1], zeta[n - 1]);
  v.v_gamma[n - 1] = bellman_target(l[n - 1], zeta[n - 1], std::nullopt, gamma);
  for (std::size_t t = n - 1; t-- > 0;) {
    v.v_star[t] = std::max(zeta[t], std::min(l[t], v.v_star[t + 1]));
    v.v_gamma[t] = bellman_target(l[t], zeta[t], v.v_gamma[t + 1], gamma);
  }
  return v;
}

}  // namespace absnav
