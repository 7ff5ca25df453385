#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "absnav/dynamics.hpp"
#include "absnav/geometry.hpp"
#include "absnav/mlp.hpp"
#include "absnav/policy.hpp"
#include "absnav/rewards.hpp"
#include "absnav/shield.hpp"

namespace absnav {

/// Observation corruption and bookkeeping for one rollout.
struct EpisodeOptions {
  bool ray_noise = true;           ///< U(-a, a) added to the agile policy's log rays
  double ray_noise_amplitude = 0.2;
  bool illusion = false;           ///< training-time far-ray overwrite
  bool record_steps = true;
  double d_max = kDefaultMaxRange;
  double r_robot = kRobotRadius;
};

struct SimConfig {
  DynamicsConfig dynamics;
  RewardConfig rewards;
  ShieldConfig shield;
  EpisodeOptions episode;
};

/// Initial condition of an episode: spawn at the origin at time zero, or
/// resume from a given state and time.
struct EpisodeStart {
  RobotState state;
  double horizon = 8.0;     // s
  double start_time = 0.0;  // s, before horizon
  /// Applied instead of any policy until start_time + hold_duration; those
  /// steps are recorded in recovery mode.
  TwistCommand hold_command;
  double hold_duration = 0.0;  // s
};

/// Episode length ~ U(7, 9) s, yaw ~ U(-pi, pi), each twist entry ~ U(-0.5, 0.5).
[[nodiscard]] EpisodeStart sample_episode_start(Rng& rng);

enum class Outcome { kSuccess, kCollision, kTimeout };

[[nodiscard]] std::string_view to_string(Outcome o);
[[nodiscard]] std::string_view to_string(Mode m);

/// State s_k and what happened from it. The final record of a trace is
/// terminal: no command is applied and its reward is zero.
struct StepRecord {
  double time = 0.0;
  RobotState state;
  Mode mode = Mode::kAgile;
  TwistCommand command;
  double v_hat = 0.0;   ///< NaN when no value network is attached
  RewardTerms reward;
  RayDistances rays{};  ///< ground-truth distances at s_k
  bool terminal = false;
  bool collided = false;
};

struct EpisodeTrace {
  std::vector<StepRecord> steps;  ///< empty unless record_steps
  Outcome outcome = Outcome::kTimeout;
  double peak_speed = 0.0;
  /// Mean planar speed from the start until first entering the tight goal
  /// radius, or over the whole episode if it never does.
  double mean_speed = 0.0;
  double total_return = 0.0;
  double horizon = 0.0;
  int num_steps = 0;            ///< control steps taken
  int recovery_steps = 0;
  std::uint64_t seed = 0;
  WorldConfig world;
  RobotState final_state;
};

/// Closed-loop rollout. With a value network the governor switches between the
/// agile policy and the twist optimizer; without one the agile policy always
/// acts. Collision ends the episode immediately. Throws ShapeMismatch on
/// inconsistent network shapes.
[[nodiscard]] EpisodeTrace run_episode(const WorldConfig& world, const AgilePolicy& policy,
                                       const MlpParams* value_net, const SimConfig& cfg,
                                       const EpisodeStart& start, std::uint64_t noise_seed);

/// Same, with the start drawn from the episode seed.
[[nodiscard]] EpisodeTrace run_episode(const WorldConfig& world, const AgilePolicy& policy,
                                       const MlpParams* value_net, const SimConfig& cfg,
                                       std::uint64_t seed);

}  // namespace absnav
