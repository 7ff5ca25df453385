#include "absnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absnav/errors.hpp"
#include "absnav/ra_value.hpp"

namespace absnav {
namespace {

void check_shapes(const AgilePolicy& policy, const MlpParams* value_net) {
  if (const auto* p = policy.params()) {
    if (p->net.input_dim() != kAgileObsDim || p->net.output_dim() != 3) {
      throw ShapeMismatch("agile policy network must map 18 inputs to 3 outputs");
    }
  }
  if (value_net && (value_net->input_dim() != kRaObsDim || value_net->output_dim() != 1)) {
    throw ShapeMismatch("value network must map 16 inputs to 1 output");
  }
}

}  // namespace

EpisodeStart sample_episode_start(Rng& rng) {
  EpisodeStart s;
  s.horizon = uniform(rng, 7.0, 9.0);
  s.state.theta = uniform(rng, -kPi, kPi);
  s.state.vx = uniform(rng, -0.5, 0.5);
  s.state.vy = uniform(rng, -0.5, 0.5);
  s.state.omega = uniform(rng, -0.5, 0.5);
  return s;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "success";
    case Outcome::kCollision: return "collision";
    case Outcome::kTimeout: return "timeout";
  }
  return "timeout";
}

std::string_view to_string(Mode m) { return m == Mode::kAgile ? "agile" : "recovery"; }

EpisodeTrace run_episode(const WorldConfig& world, const AgilePolicy& policy,
                         const MlpParams* value_net, const SimConfig& cfg,
                         const EpisodeStart& start, std::uint64_t noise_seed) {
  check_shapes(policy, value_net);
  const auto& opt = cfg.episode;
  const double dt = cfg.dynamics.dt;
  const int n_steps = static_cast<int>(std::lround(start.horizon / dt));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Rng rng = make_rng(noise_seed);

  EpisodeTrace trace;
  trace.horizon = start.horizon;
  trace.seed = noise_seed;
  trace.world = world;
  if (opt.record_steps) trace.steps.reserve(static_cast<std::size_t>(n_steps) + 1);

  RobotState state = start.state;
  TwistCommand prev_cmd{state.vx, state.vy, state.omega};
  Mode mode = Mode::kAgile;
  bool collided = false;
  bool reached = false;
  double speed_sum = 0.0;
  int speed_count = 0;

  auto track_speed = [&](const RobotState& s) {
    const double v = planar_speed(s);
    trace.peak_speed = std::max(trace.peak_speed, v);
    if (!reached) {
      speed_sum += v;
      ++speed_count;
      if (goal_distance(s, world.goal) < cfg.rewards.sigma_tight) reached = true;
    }
  };

  const int k0 = std::clamp(static_cast<int>(std::lround(start.start_time / dt)), 0, n_steps);
  int k = k0;
  for (; k < n_steps; ++k) {
    const double t = k * dt;
    track_speed(state);
    const RayDistances rays = cast_rays(state, world.obstacles, opt.d_max);

    RayDistances observed = rays;
    if (opt.illusion) observed = apply_illusion(observed, goal_distance(state, world.goal), rng);
    AgileObservation obs = make_agile_observation(state, world.goal, observed, start.horizon - t);
    if (opt.ray_noise) {
      for (auto& lr : obs.log_rays) {
        lr += uniform(rng, -opt.ray_noise_amplitude, opt.ray_noise_amplitude);
      }
    }
    const bool held = t < start.start_time + start.hold_duration - 1e-9;
    const TwistCommand agile_cmd = held ? start.hold_command : policy(obs);

    TwistCommand cmd = agile_cmd;
    double v_hat = nan;
    if (held) {
      mode = Mode::kRecovery;
      ++trace.recovery_steps;
    } else if (value_net) {
      const auto ra_obs = make_ra_observation(state, world.goal, rays);
      const auto decision = govern(ra_obs, *value_net, agile_cmd, cfg.shield, mode);
      mode = decision.mode;
      v_hat = decision.v_hat;
      if (mode == Mode::kRecovery) {
        cmd = recovery_track(decision.command, cfg.shield);
        ++trace.recovery_steps;
      }
    } else {
      mode = Mode::kAgile;
    }

    const RobotState next = step(state, cmd, cfg.dynamics);
    collided = check_collision(next, world.obstacles, opt.r_robot);
    const RewardTerms reward = step_reward(next, world.goal, cmd, prev_cmd, t + dt,
                                           start.horizon, collided, cfg.rewards);
    trace.total_return += reward.total();
    if (opt.record_steps) {
      trace.steps.push_back({t, state, mode, cmd, v_hat, reward, rays, false, false});
    }
    state = next;
    prev_cmd = cmd;
    if (collided) {
      ++k;
      break;
    }
  }

  track_speed(state);
  if (opt.record_steps) {
    StepRecord last;
    last.time = k * dt;
    last.state = state;
    last.mode = mode;
    last.rays = cast_rays(state, world.obstacles, opt.d_max);
    last.v_hat = value_net ? forward_scalar(*value_net,
                                            make_ra_observation(state, world.goal, last.rays)
                                                .to_array())
                           : nan;
    last.terminal = true;
    last.collided = collided;
    trace.steps.push_back(last);
  }

  trace.num_steps = k - k0;
  trace.final_state = state;
  trace.mean_speed = speed_count > 0 ? speed_sum / speed_count : 0.0;
  if (collided) {
    trace.outcome = Outcome::kCollision;
  } else if (goal_distance(state, world.goal) < cfg.rewards.sigma_tight) {
    trace.outcome = Outcome::kSuccess;
  } else {
    trace.outcome = Outcome::kTimeout;
  }
  return trace;
}

EpisodeTrace run_episode(const WorldConfig& world, const AgilePolicy& policy,
                         const MlpParams* value_net, const SimConfig& cfg, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const EpisodeStart start = sample_episode_start(rng);
  // Observation noise uses a stream distinct from the start draw.
  return run_episode(world, policy, value_net, cfg, start, rng());
}

}  // namespace absnav
