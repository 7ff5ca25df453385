#include "absnav/ra_training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absnav/errors.hpp"

namespace absnav {
namespace {


void scaled_column(const RaDataset& data, std::size_t i, Eigen::MatrixXd& m, Eigen::Index col) {
  const auto& s = ra_input_scales();
  const float* o = data.obs(i);
  for (int k = 0; k < kRaObsDim; ++k) m(k, col) = o[k] * s[k];
}

// Network acting on raw inputs, equal to `net` acting on scaled ones.
MlpParams fold_scales(MlpParams net) {
  const auto& s = ra_input_scales();
  for (int k = 0; k < kRaObsDim; ++k) net.weights[0].col(k) *= s[k];
  return net;
}

}  // namespace

const std::array<double, kRaObsDim>& ra_input_scales() {
  static const std::array<double, kRaObsDim> s{1.0 / 3.0, 1.0, 0.25, 0.2, 0.3, 0.5, 0.5, 0.5,
                                               0.5,       0.5, 0.5,  0.5, 0.5, 0.5, 0.5, 0.5};
  return s;
}

void validate(const RATrainConfig& cfg) {
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw ConfigError("ra.gamma must lie in [0, 1)");
  if (cfg.epochs < 1 || cfg.batches_per_epoch < 1 || cfg.batch_size < 1 ||
      cfg.target_refresh_epochs < 1) {
    throw ConfigError("ra epoch, batch and refresh counts must be positive");
  }
  if (!(cfg.learning_rate > 0.0) || !(cfg.final_learning_rate > 0.0)) {
    throw ConfigError("ra learning rates must be positive");
  }
  if (cfg.dataset_episodes < 0) throw ConfigError("ra.dataset_episodes must be non-negative");
  validate(cfg.dataset);
}

RATrainResult train_ra(const RaDataset& data, const RATrainConfig& cfg,
                       std::optional<MlpParams> init) {
  validate(cfg);
  if (data.empty()) throw EmptyDataset("cannot train the value network on an empty dataset");

  Rng rng = make_rng(cfg.seed);
  MlpParams net;
  if (init) {
    if (init->layer_dims != kRaLayerDims) throw ShapeMismatch("initial value network shape");
    net = std::move(*init);
    const auto& s = ra_input_scales();
    for (int k = 0; k < kRaObsDim; ++k) net.weights[0].col(k) /= s[k];
  } else {
    net = init_mlp(kRaLayerDims, rng);
  }
  MlpParams frozen = net;
  MlpParams grads = make_mlp(kRaLayerDims);
  AdamState adam = make_adam(net, AdamConfig{cfg.learning_rate});

  const std::size_t n = data.size();
  const auto batch = static_cast<Eigen::Index>(std::min<std::size_t>(cfg.batch_size, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;

  Eigen::MatrixXd inputs(kRaObsDim, batch);
  Eigen::MatrixXd next_inputs(kRaObsDim, batch);
  Eigen::VectorXd targets(batch);
  std::vector<std::size_t> idx(static_cast<std::size_t>(batch));

  RATrainResult result;
  result.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (epoch > 0 && epoch % cfg.target_refresh_epochs == 0) frozen = net;
    const double progress = cfg.epochs > 1 ? static_cast<double>(epoch) / (cfg.epochs - 1) : 1.0;
    adam.cfg.lr = cfg.final_learning_rate +
                  0.5 * (cfg.learning_rate - cfg.final_learning_rate) *
                      (1.0 + std::cos(kPi * progress));

    double epoch_loss = 0.0;
    for (int b = 0; b < cfg.batches_per_epoch; ++b) {
      for (Eigen::Index j = 0; j < batch; ++j) {
        if (cursor == n) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        const std::size_t i = order[cursor++];
        idx[static_cast<std::size_t>(j)] = i;
        scaled_column(data, i, inputs, j);
        if (data.terminal(i)) {
          next_inputs.col(j).setZero();
        } else {
          scaled_column(data, i + 1, next_inputs, j);
        }
      }
      const Eigen::MatrixXd v_next = forward_batch(frozen, next_inputs);
      for (Eigen::Index j = 0; j < batch; ++j) {
        const std::size_t i = idx[static_cast<std::size_t>(j)];
        std::optional<double> boot;
        if (!data.terminal(i)) boot = std::clamp(v_next(0, j), -1.0, 1.0);
        const double t =
            bellman_target(data.l_value(i), data.zeta(i, cfg.softened_zeta), boot, cfg.gamma);
        targets(j) = std::clamp(t, -1.0, 1.0);
      }
      epoch_loss += mse_loss_and_grad(net, inputs, targets, grads);
      adam_step(net, grads, adam);
    }
    result.loss_history.push_back(epoch_loss / cfg.batches_per_epoch);
  }
  result.net = fold_scales(std::move(net));
  return result;
}

double value_mse(const MlpParams& net, const std::vector<RAObservation>& obs,
                 const std::vector<double>& targets) {
  if (obs.size() != targets.size()) throw DimensionMismatch("observation and target counts differ");
  if (obs.empty()) return 0.0;
  Eigen::MatrixXd in(kRaObsDim, static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto a = obs[i].to_array();
    for (int k = 0; k < kRaObsDim; ++k) in(k, static_cast<Eigen::Index>(i)) = a[k];
  }
  const Eigen::MatrixXd out = forward_batch(net, in);
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double e = out(0, static_cast<Eigen::Index>(i)) - targets[i];
    sum += e * e;
  }
  return sum / static_cast<double>(obs.size());
}

}  // namespace absnav
