#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "absnav/mlp.hpp"
#include "absnav/ra_dataset.hpp"

namespace absnav {

/// An epoch is a fixed number of minibatches drawn without replacement from a
/// reshuffled index stream, so its cost does not grow with the dataset.
struct RATrainConfig {
  double gamma = kGammaRa;
  int epochs = 3000;
  int batches_per_epoch = 1;
  int batch_size = 4096;
  int target_refresh_epochs = 1;
  double learning_rate = 1e-3;
  double final_learning_rate = 1e-4;  ///< cosine decay target
  bool softened_zeta = true;
  int dataset_episodes = 20000;
  DatasetOptions dataset;
  std::uint64_t seed = 0;
};

void validate(const RATrainConfig& cfg);

struct RATrainResult {
  MlpParams net;
  std::vector<double> loss_history;  ///< mean minibatch loss per epoch
};

/// Fixed per-feature input scales; train_ra folds them into the first layer so
/// the returned network consumes raw observations.
[[nodiscard]] const std::array<double, kRaObsDim>& ra_input_scales();

/// Fitted value iteration on the Bellman targets, bootstrapping from a frozen
/// copy of the network refreshed every target_refresh_epochs. Targets are
/// clamped to [-1, 1]. Throws EmptyDataset.
[[nodiscard]] RATrainResult train_ra(const RaDataset& data, const RATrainConfig& cfg,
                                     std::optional<MlpParams> init = std::nullopt);

/// Mean squared error of the value network against given targets.
[[nodiscard]] double value_mse(const MlpParams& net, const std::vector<RAObservation>& obs,
                               const std::vector<double>& targets);

}  // namespace absnav
