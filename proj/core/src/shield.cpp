#include "absnav/shield.hpp"

#include <algorithm>
#include <cmath>

#include "absnav/errors.hpp"

namespace absnav {

void validate(const ShieldConfig& c) {
  if (!(c.v_threshold < 0.0)) throw ConfigError("shield: v_threshold must be negative");
  if (!(c.delta_t > 0.0)) throw ConfigError("shield: delta_t must be positive");
  if (c.max_grad_steps < 0) throw ConfigError("shield: max_grad_steps must be non-negative");
  if (!(c.step_size > 0.0) || c.lagrange < 0.0) {
    throw ConfigError("shield: step_size must be positive and lagrange non-negative");
  }
  if (c.hysteresis < 0.0) throw ConfigError("shield: hysteresis must be non-negative");
  if (c.box.lo.vx > c.box.hi.vx || c.box.lo.vy > c.box.hi.vy || c.box.lo.omega > c.box.hi.omega) {
    throw ConfigError("shield: recovery box is empty");
  }
}

Displacement linearized_displacement(const TwistCommand& tw, double dt) {
  const double dt2 = dt * dt;
  return {tw.vx * dt - 0.5 * tw.vy * tw.omega * dt2, tw.vy * dt + 0.5 * tw.vx * tw.omega * dt2};
}

double future_goal_distance(const TwistCommand& tw, double goal_x, double goal_y, double dt) {
  const auto d = linearized_displacement(tw, dt);
  return std::hypot(goal_x - d.dx, goal_y - d.dy);
}

TwistIterate evaluate_twist(const TwistCommand& tw, const RAObservation& obs,
                            const MlpParams& value_net, const ShieldConfig& cfg) {
  const auto input = with_twist(obs, tw).to_array();
  TwistIterate it;
  it.twist = tw;
  it.v_hat = forward_scalar(value_net, input);
  it.goal_distance = future_goal_distance(tw, obs.goal_x, obs.goal_y, cfg.delta_t);
  it.objective = it.goal_distance + cfg.lagrange * std::max(0.0, it.v_hat - cfg.v_threshold);
  return it;
}

TwistSearch optimize_twist(const RAObservation& obs, const MlpParams& value_net,
                           const ShieldConfig& cfg) {
  const double dt = cfg.delta_t;
  const double dt2 = dt * dt;
  const double width[3] = {cfg.box.hi.vx - cfg.box.lo.vx, cfg.box.hi.vy - cfg.box.lo.vy,
                           cfg.box.hi.omega - cfg.box.lo.omega};

  TwistSearch out;
  TwistCommand tw = cfg.box.clamp({obs.vx, obs.vy, obs.omega});
  for (int k = 0;; ++k) {
    const auto input = with_twist(obs, tw).to_array();
    const double one = 1.0;
    const bool last = k == cfg.max_grad_steps;

    TwistIterate it;
    it.twist = tw;
    Eigen::VectorXd dv;
    if (last) {
      it.v_hat = forward_scalar(value_net, input);
    } else {
      auto bp = backprop(value_net, input, std::span<const double>(&one, 1));
      it.v_hat = bp.output(0);
      dv = std::move(bp.input_grad);
    }
    const auto disp = linearized_displacement(tw, dt);
    const double ex = obs.goal_x - disp.dx;
    const double ey = obs.goal_y - disp.dy;
    it.goal_distance = std::hypot(ex, ey);
    const double violation = it.v_hat - cfg.v_threshold;
    it.objective = it.goal_distance + cfg.lagrange * std::max(0.0, violation);
    out.iterates.push_back(it);
    if (last) break;

    // d(distance)/d(twist) through the linearized displacement.
    double g[3] = {0.0, 0.0, 0.0};
    if (it.goal_distance > 0.0) {
      const double ux = -ex / it.goal_distance;
      const double uy = -ey / it.goal_distance;
      g[0] = ux * dt + uy * 0.5 * tw.omega * dt2;
      g[1] = ux * (-0.5 * tw.omega * dt2) + uy * dt;
      g[2] = ux * (-0.5 * tw.vy * dt2) + uy * (0.5 * tw.vx * dt2);
    }
    if (violation >= 0.0) {
      for (int i = 0; i < 3; ++i) g[i] += cfg.lagrange * dv(i);
    }
    // Steepest descent in box-normalised coordinates under the max-norm: the
    // dominant coordinate moves step_size of its box width.
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(g[i] * width[i]));
    if (scale == 0.0) {
      // Stationary point: remaining iterates would repeat this one.
      break;
    }
    TwistCommand next;
    next.vx = tw.vx - cfg.step_size * width[0] * (g[0] * width[0]) / scale;
    next.vy = tw.vy - cfg.step_size * width[1] * (g[1] * width[1]) / scale;
    next.omega = tw.omega - cfg.step_size * width[2] * (g[2] * width[2]) / scale;
    tw = cfg.box.clamp(next);
  }

  const TwistIterate* best = nullptr;
  for (const auto& it : out.iterates) {
    if (it.feasible(cfg.v_threshold) && (!best || it.goal_distance < best->goal_distance)) best = &it;
  }
  out.feasible = best != nullptr;
  if (!best && cfg.stop_when_infeasible) {
    out.twist = TwistCommand{0.0, 0.0, 0.0};
    return out;
  }
  if (!best) {
    for (const auto& it : out.iterates) {
      if (!best || it.v_hat < best->v_hat) best = &it;
    }
  }
  out.twist = best->twist;
  return out;
}

ModeDecision govern(const RAObservation& obs, const MlpParams& value_net,
                    const TwistCommand& agile_cmd, const ShieldConfig& cfg, Mode previous) {
  ModeDecision d;
  d.v_hat = forward_scalar(value_net, obs.to_array());
  const double threshold =
      previous == Mode::kRecovery ? cfg.v_threshold - cfg.hysteresis : cfg.v_threshold;
  if (d.v_hat < threshold) {
    d.mode = Mode::kAgile;
    d.command = agile_cmd;
    return d;
  }
  d.mode = Mode::kRecovery;
  auto search = optimize_twist(obs, value_net, cfg);
  d.command = search.twist;
  d.iterates = std::move(search.iterates);
  return d;
}

TwistCommand recovery_track(const TwistCommand& cmd, const ShieldConfig& cfg) {
  if (!cfg.box.contains(cmd)) throw BoxViolation("twist command outside the recovery box");
  return cmd;
}

}  // namespace absnav
