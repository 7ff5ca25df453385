#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "absnav/random.hpp"

namespace absnav {

/// Fully connected network with tanh hidden layers and an identity head.
/// Layer l maps dims[l] -> dims[l+1]; weights[l] is dims[l+1] x dims[l].
/// Output squashing, where wanted, is applied by the caller.
struct MlpParams {
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  [[nodiscard]] int num_layers() const { return static_cast<int>(weights.size()); }
  [[nodiscard]] int input_dim() const { return layer_dims.front(); }
  [[nodiscard]] int output_dim() const { return layer_dims.back(); }
  [[nodiscard]] std::size_t num_parameters() const;
  [[nodiscard]] bool all_finite() const;

  friend bool operator==(const MlpParams& a, const MlpParams& b);
};

/// All-zero network of the given shape. Throws DimensionMismatch on fewer than
/// two dims or a non-positive dim.
[[nodiscard]] MlpParams make_mlp(const std::vector<int>& layer_dims);

/// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
[[nodiscard]] MlpParams init_mlp(const std::vector<int>& layer_dims, Rng& rng);

[[nodiscard]] Eigen::VectorXd forward(const MlpParams& params, std::span<const double> input);
[[nodiscard]] Eigen::VectorXd forward(const MlpParams& params, const Eigen::VectorXd& input);

/// Scalar output of a single-output network.
[[nodiscard]] double forward_scalar(const MlpParams& params, std::span<const double> input);

/// Vector-Jacobian product: gradients of <output_grad, forward(input)> with
/// respect to the parameters and the input.
struct Backprop {
  Eigen::VectorXd output;
  MlpParams param_grad;
  Eigen::VectorXd input_grad;
};
[[nodiscard]] Backprop backprop(const MlpParams& params, std::span<const double> input,
                                std::span<const double> output_grad);

/// Gradient of (forward(input) - target)^2 with respect to every parameter.
[[nodiscard]] MlpParams grad_params(const MlpParams& params, std::span<const double> input,
                                    double target);

/// d forward(input) / d input for a single-output network.
[[nodiscard]] Eigen::VectorXd grad_input(const MlpParams& params, std::span<const double> input);

/// Batched forward; columns of `inputs` are samples.
[[nodiscard]] Eigen::MatrixXd forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs);

/// Mean squared error of a single-output network over the batch columns and
/// its gradient (written into `grads`, same shape as params). Returns the loss.
double mse_loss_and_grad(const MlpParams& params, const Eigen::MatrixXd& inputs,
                         const Eigen::VectorXd& targets, MlpParams& grads);

/// Same for a vector-output network: mean over samples of the squared norm of
/// the residual.
double mse_loss_and_grad(const MlpParams& params, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets, MlpParams& grads);

/// Parameters flattened layer by layer: weights row-major, then biases.
[[nodiscard]] std::vector<double> flatten(const MlpParams& params);
void unflatten(std::span<const double> flat, MlpParams& params);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  MlpParams m;
  MlpParams v;
  long step = 0;
  AdamConfig cfg;
};

[[nodiscard]] AdamState make_adam(const MlpParams& params, const AdamConfig& cfg = {});

/// One bias-corrected Adam update, in place.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

}  // namespace absnav
