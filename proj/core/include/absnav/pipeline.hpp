#pragma once

#include <cstdint>

#include "absnav/agile_training.hpp"
#include "absnav/benchmark.hpp"
#include "absnav/config.hpp"

namespace absnav {

/// Warm start (if enabled) followed by the cross-entropy search.
[[nodiscard]] AgileTrainResult train_agile_policy(const AppConfig& cfg, std::uint64_t seed);

/// Base seed of the dataset worlds for a policy seed; disjoint from the
/// benchmark worlds.
[[nodiscard]] std::uint64_t dataset_base_seed(std::uint64_t seed);

[[nodiscard]] RaDataset collect_ra_dataset(const AppConfig& cfg, const AgilePolicy& policy,
                                           std::uint64_t seed);

[[nodiscard]] RATrainResult train_value_net(const AppConfig& cfg, const RaDataset& data,
                                            std::uint64_t seed);

/// Agile policy, dataset and value network for one seed.
struct StackBuild {
  PolicyStack stack;
  RaDataset dataset;
  AgileTrainResult agile;
  RATrainResult value;
};

[[nodiscard]] StackBuild build_stack(const AppConfig& cfg, std::uint64_t seed);

[[nodiscard]] BenchmarkConfig benchmark_config(const AppConfig& cfg);

}  // namespace absnav
