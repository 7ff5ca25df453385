#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absnav/cem.hpp"
#include "absnav/episode.hpp"
#include "absnav/ra_training.hpp"
#include "absnav/rewards.hpp"

namespace absnav {

struct AgileSettings {
  bool curriculum = true;
  bool warm_start = true;  ///< seed the search with a fit of the scripted controller
  int imitation_episodes = 200;
  int imitation_epochs = 40;
};

struct HarnessConfig {
  int episodes = 1000;
  std::uint64_t base_seed = 42;
  std::vector<std::uint64_t> seeds{0, 1, 2};  ///< one policy stack per seed
  int parallelism = 1;
  Variant variant = Variant::kNominal;
  bool shield = true;
  EpisodeOptions episode;
};

/// Search schedule used by the pipeline: fewer, better-evaluated iterations
/// started from the warm start.
[[nodiscard]] inline CemConfig pipeline_cem_config() {
  CemConfig c;
  c.iterations = 60;
  c.episodes_per_eval = 24;
  c.init_std = 0.1;
  return c;
}

[[nodiscard]] inline ShieldConfig pipeline_shield_config() {
  ShieldConfig c;
  c.stop_when_infeasible = true;
  return c;
}

/// Everything the CLI reads from a config file. Sections: dynamics, rewards,
/// cem, ra, shield, harness.
struct AppConfig {
  DynamicsConfig dynamics;
  RewardConfig rewards;
  CemConfig cem = pipeline_cem_config();
  AgileSettings agile;
  RATrainConfig ra;
  ShieldConfig shield = pipeline_shield_config();
  HarnessConfig harness;

  [[nodiscard]] SimConfig sim() const;
};

/// Validates every section. Throws ConfigError.
void validate(const AppConfig& cfg);

/// Parses JSON text. Missing keys keep their defaults; unknown sections or
/// keys, wrong types and invalid values throw ConfigError.
[[nodiscard]] AppConfig parse_config(const std::string& text);
[[nodiscard]] AppConfig load_config(const std::filesystem::path& path);

/// Canonical JSON with every key present.
[[nodiscard]] std::string dump_config(const AppConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical dump.
[[nodiscard]] std::string config_hash(const AppConfig& cfg);

}  // namespace absnav
