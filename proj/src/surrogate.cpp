#include "softbandit/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace softbandit {
namespace {

void check_input(const SurrogateNet& net, std::span<const double> input) {
  if (input.size() != net.input_dim())
    throw std::invalid_argument("surrogate input has length " + std::to_string(input.size()) +
                                ", expected " + std::to_string(net.input_dim()));
}

// Stores hidden pre-activations and returns the network output.
double hidden_pass(const SurrogateNet& net, std::span<const double> x,
                   std::span<double> pre) {
  const std::size_t in = net.input_dim();
  const auto w1 = net.w1();
  const auto b1 = net.b1();
  const auto w2 = net.w2();
  double out = net.b2();
  for (std::size_t i = 0; i < net.hidden_dim(); ++i) {
    const double* row = w1.data() + i * in;
    double p = b1[i];
    for (std::size_t j = 0; j < in; ++j) p += row[j] * x[j];
    pre[i] = p;
    if (p > 0.0) out += w2[i] * p;
  }
  return out;
}

// Adds scale * d(output)/d(params) into grad. Subgradient 0 at the kink.
void backprop(const SurrogateNet& net, std::span<const double> x,
              std::span<const double> pre, double scale, std::span<double> grad) {
  const std::size_t in = net.input_dim();
  const auto w2 = net.w2();
  for (std::size_t i = 0; i < net.hidden_dim(); ++i) {
    if (!(pre[i] > 0.0)) continue;
    grad[net.w2_offset() + i] += scale * pre[i];
    const double back = scale * w2[i];
    double* g_row = grad.data() + i * in;
    for (std::size_t j = 0; j < in; ++j) g_row[j] += back * x[j];
    grad[net.b1_offset() + i] += back;
  }
  grad[net.b2_offset()] += scale;
}

}  // namespace

SurrogateNet::SurrogateNet(std::size_t input_dim, std::size_t hidden_dim)
    : input_dim_(input_dim),
      hidden_dim_(hidden_dim),
      params_(hidden_dim * input_dim + 2 * hidden_dim + 1, 0.0) {
  if (input_dim == 0 || hidden_dim == 0)
    throw std::invalid_argument("surrogate dimensions must be >= 1");
}

void ObservationHistory::add(SoftPromptLatent latent, double reward) {
  if (!std::isfinite(reward)) throw std::invalid_argument("observation reward is not finite");
  if (!items_.empty() && latent.size() != items_.front().latent.size())
    throw std::invalid_argument("observation latent length " + std::to_string(latent.size()) +
                                " differs from history length " +
                                std::to_string(items_.front().latent.size()));
  items_.push_back(Observation{std::move(latent), reward});
}

std::pair<SurrogateNet, OptimizerState> init_surrogate(std::size_t input_dim,
                                                       std::size_t hidden_dim,
                                                       RngStream& rng) {
  SurrogateNet net(input_dim, hidden_dim);
  const double a1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
  const double a2 = std::sqrt(6.0 / static_cast<double>(hidden_dim + 1));
  std::uniform_real_distribution<double> u1(-a1, a1);
  std::uniform_real_distribution<double> u2(-a2, a2);
  for (double& w : net.w1()) w = u1(rng);
  for (double& w : net.w2()) w = u2(rng);
  OptimizerState opt(net.param_count());
  return {std::move(net), std::move(opt)};
}

std::pair<SurrogateNet, OptimizerState> init_surrogate(const ExperimentConfig& config,
                                                       RngStream& rng) {
  return init_surrogate(config.intrinsic_dim, config.hidden_dim, rng);
}

double forward(const SurrogateNet& net, std::span<const double> input) {
  check_input(net, input);
  const std::size_t in = net.input_dim();
  const auto w1 = net.w1();
  const auto b1 = net.b1();
  const auto w2 = net.w2();
  double out = net.b2();
  for (std::size_t i = 0; i < net.hidden_dim(); ++i) {
    const double* row = w1.data() + i * in;
    double pre = b1[i];
    for (std::size_t j = 0; j < in; ++j) pre += row[j] * input[j];
    if (pre > 0.0) out += w2[i] * pre;
  }
  return out;
}

double forward_with_grad(const SurrogateNet& net, std::span<const double> input,
                         std::span<double> grad) {
  check_input(net, input);
  if (grad.size() != net.param_count())
    throw std::invalid_argument("gradient buffer has wrong length");
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> pre(net.hidden_dim());
  const double out = hidden_pass(net, input, pre);
  backprop(net, input, pre, 1.0, grad);
  return out;
}

std::vector<double> grad_params(const SurrogateNet& net, std::span<const double> input) {
  std::vector<double> grad(net.param_count());
  forward_with_grad(net, input, grad);
  return grad;
}

double training_mse(const SurrogateNet& net, const ObservationHistory& history) {
  if (history.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& obs : history) {
    const double err = forward(net, obs.latent) - obs.reward;
    sum += err * err;
  }
  return sum / static_cast<double>(history.size());
}

void adamw_step(SurrogateNet& net, OptimizerState& opt, std::span<const double> grad,
                double learning_rate) {
  const std::size_t n = net.param_count();
  if (grad.size() != n || opt.first_moment.size() != n || opt.second_moment.size() != n)
    throw std::invalid_argument("adamw_step: parameter/moment length mismatch");
  opt.step += 1;
  const double t = static_cast<double>(opt.step);
  const double bias1 = 1.0 - std::pow(opt.beta1, t);
  const double bias2 = 1.0 - std::pow(opt.beta2, t);
  auto params = net.params();
  for (std::size_t k = 0; k < n; ++k) {
    if (net.is_weight(k)) params[k] -= learning_rate * opt.weight_decay * params[k];
    auto& m = opt.first_moment[k];
    auto& v = opt.second_moment[k];
    m = opt.beta1 * m + (1.0 - opt.beta1) * grad[k];
    v = opt.beta2 * v + (1.0 - opt.beta2) * grad[k] * grad[k];
    const double m_hat = m / bias1;
    const double v_hat = v / bias2;
    params[k] -= learning_rate * m_hat / (std::sqrt(v_hat) + opt.epsilon);
  }
}

void train_local(SurrogateNet& net, OptimizerState& opt, const ObservationHistory& history,
                 std::size_t steps, double learning_rate) {
  if (history.empty()) throw std::invalid_argument("train_local: empty history");
  for (const auto& obs : history) check_input(net, obs.latent);
  std::vector<double> grad(net.param_count());
  std::vector<double> pre(net.hidden_dim());
  const double n = static_cast<double>(history.size());
  for (std::size_t step = 0; step < steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    // d/dθ (1/n) Σ (f - r)^2 = (2/n) Σ (f - r) df/dθ
    for (const auto& obs : history) {
      const double out = hidden_pass(net, obs.latent, pre);
      backprop(net, obs.latent, pre, 2.0 * (out - obs.reward) / n, grad);
    }
    adamw_step(net, opt, grad, learning_rate);
  }
}

}  // namespace softbandit
