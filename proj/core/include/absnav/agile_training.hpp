#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "absnav/cem.hpp"
#include "absnav/episode.hpp"
#include "absnav/policy.hpp"

namespace absnav {

/// Undiscounted return of one agile-only episode (start drawn from `seed`).
[[nodiscard]] double evaluate_return(const AgilePolicy& policy, const WorldConfig& world,
                                     const SimConfig& cfg, std::uint64_t seed);

/// Difficulty level = number of obstacles in a training world. After an
/// episode ends, the level goes up if the robot finished within sigma_tight of
/// the goal, down if it finished beyond sigma_soft; promotion past the top
/// level resets to a random level.
struct Curriculum {
  int max_level = 8;
  int initial_max_level = 4;
};

[[nodiscard]] int next_level(int level, double final_goal_distance, const RewardConfig& rewards,
                             int max_level, Rng& rng);

struct AgileTrainOptions {
  bool curriculum = true;
  Curriculum levels;
  int parallelism = 1;
  /// Starting mean of the search; random initialisation when empty.
  std::optional<PolicyParams> init;
  /// The best candidate of each iteration is archived. The top
  /// validation_candidates of the archive and the final mean are re-scored on
  /// validation_episodes fresh full-density episodes and the best is returned.
  /// Zero candidates returns the best-scoring candidate as is.
  int validation_candidates = 8;
  int validation_episodes = 64;
};

/// Training-time simulation defaults: ray noise and illusion enabled.
[[nodiscard]] SimConfig training_sim_config(SimConfig base);

struct AgileTrainResult {
  PolicyParams best;
  double best_return = 0.0;  ///< validation score when validation ran
  double search_return = 0.0;  ///< best noisy score seen during the search
  std::vector<CemIteration> history;
};

/// Cross-entropy search over the flattened policy parameters. Every candidate
/// of an iteration is scored on the same episodes_per_eval (world, episode)
/// seeds; the score is the mean undiscounted return.
[[nodiscard]] AgileTrainResult train_agile(const CemConfig& cem, const SimConfig& sim,
                                           std::uint64_t seed,
                                           const AgileTrainOptions& options = {});

/// Supervised fit of the policy network to the scripted controller on states
/// visited by the scripted controller. Used to seed the search.
struct ImitationConfig {
  int episodes = 200;
  int epochs = 300;
  int batch_size = 256;
  double learning_rate = 3e-3;
};

[[nodiscard]] PolicyParams imitate_scripted(const SimConfig& sim, std::uint64_t seed,
                                            const ImitationConfig& cfg = {});

}  // namespace absnav
