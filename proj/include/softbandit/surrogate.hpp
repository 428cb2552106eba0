#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "softbandit/config.hpp"
#include "softbandit/projection.hpp"
#include "softbandit/rng.hpp"

namespace softbandit {

// One-hidden-layer ReLU regressor: W2 . relu(W1 x + b1) + b2.
//
// Parameters live in a single flat vector in the order
//   W1 (hidden x input, row-major) | b1 (hidden) | W2 (hidden) | b2
// which is also the layout of grad_params and the optimizer moments.
class SurrogateNet {
 public:
  SurrogateNet(std::size_t input_dim, std::size_t hidden_dim);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }
  std::size_t param_count() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<double> w1() { return {params_.data(), w1_size()}; }
  std::span<double> b1() { return {params_.data() + b1_offset(), hidden_dim_}; }
  std::span<double> w2() { return {params_.data() + w2_offset(), hidden_dim_}; }
  double& b2() { return params_.back(); }
  std::span<const double> w1() const { return {params_.data(), w1_size()}; }
  std::span<const double> b1() const {
    return {params_.data() + b1_offset(), hidden_dim_};
  }
  std::span<const double> w2() const {
    return {params_.data() + w2_offset(), hidden_dim_};
  }
  double b2() const { return params_.back(); }

  // True for entries of W1 and W2, which receive weight decay.
  bool is_weight(std::size_t flat_index) const {
    return flat_index < b1_offset() ||
           (flat_index >= w2_offset() && flat_index < w2_offset() + hidden_dim_);
  }

  std::size_t w1_size() const { return hidden_dim_ * input_dim_; }
  std::size_t b1_offset() const { return w1_size(); }
  std::size_t w2_offset() const { return w1_size() + hidden_dim_; }
  std::size_t b2_offset() const { return w1_size() + 2 * hidden_dim_; }

  bool operator==(const SurrogateNet&) const = default;

 private:
  std::size_t input_dim_;
  std::size_t hidden_dim_;
  std::vector<double> params_;
};

// AdamW state. Moments share the flat parameter layout.
struct OptimizerState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;

  explicit OptimizerState(std::size_t param_count = 0)
      : first_moment(param_count, 0.0), second_moment(param_count, 0.0) {}

  bool operator==(const OptimizerState&) const = default;
};

struct Observation {
  SoftPromptLatent latent;
  double reward = 0.0;

  bool operator==(const Observation&) const = default;
};

// Append-only record of (latent, reward) pairs sharing one latent length.
class ObservationHistory {
 public:
  // Throws std::invalid_argument on a non-finite reward or a latent whose
  // length differs from earlier entries.
  void add(SoftPromptLatent latent, double reward);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Observation& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<Observation> items_;
};

// Glorot-uniform weights, zero biases, zero moments.
std::pair<SurrogateNet, OptimizerState> init_surrogate(std::size_t input_dim,
                                                       std::size_t hidden_dim,
                                                       RngStream& rng);
std::pair<SurrogateNet, OptimizerState> init_surrogate(
    const ExperimentConfig& config, RngStream& rng);

// Throws std::invalid_argument when input.size() != net.input_dim().
double forward(const SurrogateNet& net, std::span<const double> input);

std::vector<double> grad_params(const SurrogateNet& net,
                                std::span<const double> input);

// Writes the parameter gradient into grad (length param_count) and returns
// the forward value.
double forward_with_grad(const SurrogateNet& net, std::span<const double> input,
                         std::span<double> grad);

double training_mse(const SurrogateNet& net, const ObservationHistory& history);

// Full-batch AdamW on mean squared error, warm-started from (net, opt).
// Throws std::invalid_argument on an empty history.
void train_local(SurrogateNet& net, OptimizerState& opt,
                 const ObservationHistory& history, std::size_t steps = 40,
                 double learning_rate = 3e-4);

// A single AdamW update with an explicit gradient.
void adamw_step(SurrogateNet& net, OptimizerState& opt,
                std::span<const double> grad, double learning_rate);

}  // namespace softbandit
