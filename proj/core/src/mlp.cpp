#include "absnav/mlp.hpp"

#include <cmath>
#include <string>

#include "absnav/errors.hpp"

namespace absnav {
namespace {

void check_input(const MlpParams& p, std::size_t n) {
  if (static_cast<int>(n) != p.input_dim()) {
    throw DimensionMismatch("mlp input has " + std::to_string(n) + " entries, expected " +
                            std::to_string(p.input_dim()));
  }
}

void check_same_shape(const MlpParams& a, const MlpParams& b) {
  if (a.layer_dims != b.layer_dims) throw DimensionMismatch("mlp shapes differ");
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s) {
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

}  // namespace

std::size_t MlpParams::num_parameters() const {
  std::size_t n = 0;
  for (int l = 0; l < num_layers(); ++l) {
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return n;
}

bool MlpParams::all_finite() const {
  for (int l = 0; l < num_layers(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  if (a.layer_dims != b.layer_dims) return false;
  for (int l = 0; l < a.num_layers(); ++l) {
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  }
  return true;
}

MlpParams make_mlp(const std::vector<int>& dims) {
  if (dims.size() < 2) throw DimensionMismatch("mlp needs at least an input and an output dim");
  for (int d : dims) {
    if (d <= 0) throw DimensionMismatch("mlp layer dims must be positive");
  }
  MlpParams p;
  p.layer_dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.weights.push_back(Eigen::MatrixXd::Zero(dims[l + 1], dims[l]));
    p.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
  }
  return p;
}

MlpParams init_mlp(const std::vector<int>& dims, Rng& rng) {
  MlpParams p = make_mlp(dims);
  for (int l = 0; l < p.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    // Row-major fill order so the draw sequence matches flatten().
    for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) {
        p.weights[l](r, c) = uniform(rng, -bound, bound);
      }
    }
    for (Eigen::Index r = 0; r < p.biases[l].size(); ++r) {
      p.biases[l](r) = uniform(rng, -bound, bound);
    }
  }
  return p;
}

Eigen::VectorXd forward(const MlpParams& p, const Eigen::VectorXd& input) {
  check_input(p, static_cast<std::size_t>(input.size()));
  Eigen::VectorXd a = input;
  const int last = p.num_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    Eigen::VectorXd z = p.weights[l] * a + p.biases[l];
    if (l < last) z = z.array().tanh();
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd forward(const MlpParams& p, std::span<const double> input) {
  check_input(p, input.size());
  return forward(p, Eigen::VectorXd(as_vector(input)));
}

double forward_scalar(const MlpParams& p, std::span<const double> input) {
  if (p.output_dim() != 1) throw DimensionMismatch("forward_scalar needs a single-output mlp");
  return forward(p, input)(0);
}

Backprop backprop(const MlpParams& p, std::span<const double> input,
                  std::span<const double> output_grad) {
  check_input(p, input.size());
  if (static_cast<int>(output_grad.size()) != p.output_dim()) {
    throw DimensionMismatch("output gradient length does not match the mlp output");
  }
  const int n = p.num_layers();
  std::vector<Eigen::VectorXd> acts;
  acts.reserve(static_cast<std::size_t>(n) + 1);
  acts.emplace_back(as_vector(input));
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd z = p.weights[l] * acts.back() + p.biases[l];
    if (l < n - 1) z = z.array().tanh();
    acts.push_back(std::move(z));
  }

  Backprop out{acts.back(), make_mlp(p.layer_dims), {}};
  Eigen::VectorXd delta = as_vector(output_grad);
  for (int l = n - 1; l >= 0; --l) {
    if (l < n - 1) delta.array() *= 1.0 - acts[l + 1].array().square();
    out.param_grad.weights[l].noalias() = delta * acts[l].transpose();
    out.param_grad.biases[l] = delta;
    delta = p.weights[l].transpose() * delta;
  }
  out.input_grad = std::move(delta);
  return out;
}

MlpParams grad_params(const MlpParams& p, std::span<const double> input, double target) {
  if (p.output_dim() != 1) throw DimensionMismatch("grad_params needs a single-output mlp");
  const double residual = forward_scalar(p, input) - target;
  const double g = 2.0 * residual;
  return backprop(p, input, std::span<const double>(&g, 1)).param_grad;
}

Eigen::VectorXd grad_input(const MlpParams& p, std::span<const double> input) {
  if (p.output_dim() != 1) throw DimensionMismatch("grad_input needs a single-output mlp");
  const double one = 1.0;
  return backprop(p, input, std::span<const double>(&one, 1)).input_grad;
}

Eigen::MatrixXd forward_batch(const MlpParams& p, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != p.input_dim()) {
    throw DimensionMismatch("batch rows do not match the mlp input dim");
  }
  Eigen::MatrixXd a = inputs;
  const int last = p.num_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    Eigen::MatrixXd z = p.weights[l] * a;
    z.colwise() += p.biases[l];
    if (l < last) z = z.array().tanh();
    a = std::move(z);
  }
  return a;
}

double mse_loss_and_grad(const MlpParams& p, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets, MlpParams& grads) {
  if (inputs.rows() != p.input_dim() || targets.rows() != p.output_dim() ||
      targets.cols() != inputs.cols()) {
    throw DimensionMismatch("batch shapes do not match the mlp");
  }
  if (grads.layer_dims != p.layer_dims) grads = make_mlp(p.layer_dims);
  const int n = p.num_layers();
  const double batch = static_cast<double>(inputs.cols());

  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(static_cast<std::size_t>(n) + 1);
  acts.push_back(inputs);
  for (int l = 0; l < n; ++l) {
    Eigen::MatrixXd z = p.weights[l] * acts.back();
    z.colwise() += p.biases[l];
    if (l < n - 1) z = z.array().tanh();
    acts.push_back(std::move(z));
  }

  Eigen::MatrixXd delta = acts.back() - targets;
  const double loss = delta.squaredNorm() / batch;
  delta *= 2.0 / batch;
  for (int l = n - 1; l >= 0; --l) {
    if (l < n - 1) delta.array() *= 1.0 - acts[l + 1].array().square();
    grads.weights[l].noalias() = delta * acts[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) delta = p.weights[l].transpose() * delta;
  }
  return loss;
}

double mse_loss_and_grad(const MlpParams& p, const Eigen::MatrixXd& inputs,
                         const Eigen::VectorXd& targets, MlpParams& grads) {
  return mse_loss_and_grad(p, inputs, Eigen::MatrixXd(targets.transpose()), grads);
}

std::vector<double> flatten(const MlpParams& p) {
  std::vector<double> flat;
  flat.reserve(p.num_parameters());
  for (int l = 0; l < p.num_layers(); ++l) {
    for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) flat.push_back(p.weights[l](r, c));
    }
    for (Eigen::Index r = 0; r < p.biases[l].size(); ++r) flat.push_back(p.biases[l](r));
  }
  return flat;
}

void unflatten(std::span<const double> flat, MlpParams& p) {
  if (flat.size() != p.num_parameters()) {
    throw DimensionMismatch("flat parameter vector has the wrong length");
  }
  std::size_t k = 0;
  for (int l = 0; l < p.num_layers(); ++l) {
    for (Eigen::Index r = 0; r < p.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < p.weights[l].cols(); ++c) p.weights[l](r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < p.biases[l].size(); ++r) p.biases[l](r) = flat[k++];
  }
}

AdamState make_adam(const MlpParams& params, const AdamConfig& cfg) {
  return {make_mlp(params.layer_dims), make_mlp(params.layer_dims), 0, cfg};
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& s) {
  check_same_shape(params, grads);
  check_same_shape(params, s.m);
  ++s.step;
  const double b1 = s.cfg.beta1;
  const double b2 = s.cfg.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(s.step));
  const double lr = s.cfg.lr;
  const double eps = s.cfg.eps;

  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (int l = 0; l < params.num_layers(); ++l) {
    update(params.weights[l], grads.weights[l], s.m.weights[l], s.v.weights[l]);
    update(params.biases[l], grads.biases[l], s.m.biases[l], s.v.biases[l]);
  }
}

}  // namespace absnav
