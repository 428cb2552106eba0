#include "softbandit/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace softbandit {
namespace {

struct Prediction {
  double mean = 0.0;
  double sigma = 0.0;
};

Prediction predict(const BanditState& state, std::span<const double> latent,
                   std::span<double> grad) {
  Prediction p;
  p.mean = forward_with_grad(state.net, latent, grad);
  p.sigma = state_confidence_width(state, grad);
  return p;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

// Solves L y = rhs in place against the packed factor.
void forward_substitute(std::span<const double> packed, std::span<double> rhs) {
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const double* row = packed.data() + i * (i + 1) / 2;
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= row[k] * rhs[k];
    rhs[i] = acc / row[i];
  }
}

std::span<const double> feature_row(const BanditState& state, std::size_t i) {
  const std::size_t p = state.net.param_count();
  return {state.observed_features.data() + i * p, p};
}

}  // namespace

double confidence_width(std::span<const double> features, std::span<const double> cov_diag,
                        double feature_scale) {
  if (features.size() != cov_diag.size())
    throw std::invalid_argument("confidence_width: feature/covariance length mismatch");
  double quad = 0.0;
  for (std::size_t j = 0; j < features.size(); ++j)
    quad += features[j] * features[j] / cov_diag[j];
  return std::sqrt(feature_scale * quad);
}

BanditState::BanditState(SurrogateNet net_in, OptimizerState opt_in, double lambda,
                         double nu_in, double scale)
    : net(std::move(net_in)),
      opt(std::move(opt_in)),
      cov_diag(net.param_count(), lambda),
      lambda_reg(lambda),
      nu(nu_in),
      feature_scale(scale) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda_reg must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("feature_scale must be > 0");
}

std::size_t BanditState::observed_count() const {
  const std::size_t p = net.param_count();
  return p == 0 ? 0 : observed_features.size() / p;
}

double state_confidence_width(const BanditState& state, std::span<const double> features) {
  if (state.covariance == CovarianceMode::Diagonal)
    return confidence_width(features, state.cov_diag, state.feature_scale);
  if (features.size() != state.net.param_count())
    throw std::invalid_argument("state_confidence_width: feature length mismatch");
  const std::size_t t = state.observed_count();
  const double fs = state.feature_scale;
  const double norm2 = dot(features, features);
  std::vector<double> v(t);
  for (std::size_t i = 0; i < t; ++i) v[i] = dot(feature_row(state, i), features);
  forward_substitute(state.gram_cholesky, v);
  // g^T Z^-1 g = (|g|^2 - v^T (lambda I + U U^T)^-1 v) / lambda, v = U g.
  const double quad = std::max(0.0, norm2 - dot(v, v)) / state.lambda_reg;
  return std::sqrt(fs * quad);
}

BanditState make_bandit_state(const ExperimentConfig& config, RngStream& rng) {
  auto [net, opt] = init_surrogate(config, rng);
  BanditState state(std::move(net), std::move(opt), config.lambda_reg, config.nu,
                    config.effective_feature_scale());
  state.local_iterations = config.local_iterations;
  state.learning_rate = config.learning_rate;
  state.covariance = config.covariance;
  return state;
}

double sigma(const BanditState& state, std::span<const double> latent) {
  std::vector<double> grad(state.net.param_count());
  return predict(state, latent, grad).sigma;
}

double ucb_score(const BanditState& state, std::span<const double> latent) {
  std::vector<double> grad(state.net.param_count());
  const auto p = predict(state, latent, grad);
  return p.mean + state.current_nu() * p.sigma;
}

double ts_sample(const BanditState& state, std::span<const double> latent, RngStream& rng) {
  std::vector<double> grad(state.net.param_count());
  const auto p = predict(state, latent, grad);
  std::normal_distribution<double> standard(0.0, 1.0);
  const double z = standard(rng);
  const double spread = state.current_nu() * p.sigma;
  return spread > 0.0 ? p.mean + spread * z : p.mean;
}

std::size_t argmax_lowest(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax over an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

std::vector<double> acquisition_scores(const BanditState& state, const CandidatePool& pool,
                                       Policy policy, RngStream& rng) {
  if (policy == Policy::RandomSearch)
    throw std::invalid_argument("RandomSearch has no acquisition function");
  std::vector<double> grad(state.net.param_count());
  std::vector<double> scores(pool.size());
  const double nu = state.current_nu();
  std::normal_distribution<double> standard(0.0, 1.0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto p = predict(state, pool[i], grad);
    if (policy == Policy::NeuralUCB) {
      scores[i] = p.mean + nu * p.sigma;
    } else {
      const double z = standard(rng);
      const double spread = nu * p.sigma;
      scores[i] = spread > 0.0 ? p.mean + spread * z : p.mean;
    }
  }
  return scores;
}

Selection select_uniform(const CandidatePool& pool, RngStream& rng) {
  if (pool.empty()) throw std::invalid_argument("select_uniform: empty candidate pool");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const std::size_t index = pick(rng);
  return Selection{index, pool[index]};
}

Selection select_next(const BanditState& state, const CandidatePool& pool, Policy policy,
                      RngStream& rng) {
  if (pool.empty()) throw std::invalid_argument("select_next: empty candidate pool");
  if (state.history.empty() || policy == Policy::RandomSearch) return select_uniform(pool, rng);
  const std::size_t index = argmax_lowest(acquisition_scores(state, pool, policy, rng));
  return Selection{index, pool[index]};
}

void accumulate_confidence(BanditState& state, std::span<const double> latent) {
  std::vector<double> grad(state.net.param_count());
  forward_with_grad(state.net, latent, grad);
  for (std::size_t j = 0; j < grad.size(); ++j)
    state.cov_diag[j] += state.feature_scale * grad[j] * grad[j];
  if (state.covariance == CovarianceMode::Diagonal) return;

  const double root = std::sqrt(state.feature_scale);
  for (double& g : grad) g *= root;
  const std::size_t t = state.observed_count();
  std::vector<double> row(t);
  for (std::size_t i = 0; i < t; ++i) row[i] = dot(feature_row(state, i), grad);
  forward_substitute(state.gram_cholesky, row);
  const double pivot = state.lambda_reg + dot(grad, grad) - dot(row, row);
  state.gram_cholesky.insert(state.gram_cholesky.end(), row.begin(), row.end());
  state.gram_cholesky.push_back(std::sqrt(std::max(pivot, state.lambda_reg * 1e-12)));
  state.observed_features.insert(state.observed_features.end(), grad.begin(), grad.end());
}

void update_posterior(BanditState& state, const SoftPromptLatent& chosen, double reward) {
  if (!std::isfinite(reward)) throw std::invalid_argument("update_posterior: reward is not finite");
  accumulate_confidence(state, chosen);
  state.history.add(chosen, reward);
  train_local(state.net, state.opt, state.history, state.local_iterations, state.learning_rate);
  state.iteration += 1;
}

}  // namespace softbandit
