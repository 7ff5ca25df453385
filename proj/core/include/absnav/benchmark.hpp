#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absnav/episode.hpp"
#include "absnav/ra_dataset.hpp"
#include "absnav/ra_training.hpp"
#include "absnav/rewards.hpp"

namespace absnav {

/// One trained agile policy with its value network (if any).
struct PolicyStack {
  std::uint64_t seed = 0;
  AgilePolicy agile;
  std::optional<MlpParams> value_net;
};

struct BenchmarkConfig {
  int n_episodes = 1000;
  std::uint64_t base_seed = 42;
  bool shield = true;
  int parallelism = 1;
  Variant variant = Variant::kNominal;  ///< label only
  std::string config_hash;              ///< copied into the report
};

struct EpisodeSummary {
  Outcome outcome = Outcome::kTimeout;
  double peak_speed = 0.0;
  double mean_speed = 0.0;
  int recovery_steps = 0;
};

struct SeedReport {
  std::uint64_t seed = 0;
  int episodes = 0;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
  double success_pct = 0.0;
  double collision_pct = 0.0;
  double timeout_pct = 0.0;
  double vpeak_mean = 0.0;  ///< over successes; NaN without any
  double vbar_mean = 0.0;
  std::vector<EpisodeSummary> summaries;  ///< indexed by episode
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation over seeds
};

struct BenchmarkReport {
  std::string variant;
  bool shield = true;
  std::string config_hash;
  std::vector<SeedReport> per_seed;
  MeanStd success_pct;
  MeanStd collision_pct;
  MeanStd timeout_pct;
  MeanStd vpeak_mean;
  MeanStd vbar_mean;
};

/// World and episode i, shared by every stack: the world seed is
/// base_seed ^ i and the episode start and noise derive from it.
[[nodiscard]] WorldConfig benchmark_world(std::uint64_t base_seed, int index);
[[nodiscard]] std::uint64_t benchmark_episode_seed(std::uint64_t base_seed, int index);

[[nodiscard]] SeedReport summarize(std::uint64_t seed, std::vector<EpisodeSummary> summaries);
[[nodiscard]] MeanStd mean_std(const std::vector<double>& values);

/// Runs n_episodes test-world episodes per stack. With shield off, or for a
/// stack without a value network, the agile policy always acts.
[[nodiscard]] BenchmarkReport run_benchmark(const std::vector<PolicyStack>& stacks,
                                            const SimConfig& sim, const BenchmarkConfig& cfg);

/// Header `variant,shield,seed,...`; one row per seed, then a `mean` row.
void write_metrics_csv(const BenchmarkReport& report, std::ostream& out, bool header = true);

struct ThresholdRow {
  double threshold = 0.0;
  BenchmarkReport report;
};

/// Shielded benchmark per threshold over the same worlds and seeds. Throws
/// ConfigError on a non-negative threshold.
[[nodiscard]] std::vector<ThresholdRow> sweep_threshold(const std::vector<PolicyStack>& stacks,
                                                        const std::vector<double>& thresholds,
                                                        const SimConfig& sim,
                                                        const BenchmarkConfig& cfg);

struct AblationInput {
  std::uint64_t seed = 0;
  AgilePolicy agile;
  const RaDataset* dataset = nullptr;
  /// Reused instead of retraining when it was already fitted on `dataset`
  /// with the same training seed.
  std::optional<MlpParams> softened_net;
};

struct AblationRow {
  std::string label;  ///< softened, raw or agile-only
  BenchmarkReport report;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::vector<MlpParams> softened_nets;
  std::vector<MlpParams> raw_nets;
};

/// Trains one value network per input with softened and one with raw failure
/// labels (same data, training seed = input seed) and benchmarks both with the same
/// shield, plus the unshielded policy.
[[nodiscard]] AblationResult ablate_zeta(const std::vector<AblationInput>& inputs,
                                         const RATrainConfig& ra, const SimConfig& sim,
                                         const BenchmarkConfig& cfg);

/// Writes rows as metrics CSV with the label in the variant column.
void write_table_csv(const std::vector<AblationRow>& rows, std::ostream& out);
void write_table_csv(const std::vector<ThresholdRow>& rows, std::ostream& out);

}  // namespace absnav
