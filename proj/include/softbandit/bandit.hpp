#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "softbandit/candidates.hpp"
#include "softbandit/config.hpp"
#include "softbandit/rng.hpp"
#include "softbandit/surrogate.hpp"

namespace softbandit {

// Exploration weight as a function of the iteration index.
using NuSchedule = std::function<double(std::size_t t)>;

// Surrogate, optimizer, history and confidence state of one run.
//
// The design matrix is Z = lambda I + sum_i u_i u_i^T with
// u_i = sqrt(feature_scale) * g_i, g_i the surrogate gradient at the i-th
// observed latent. Under CovarianceMode::Full it is never formed: the u_i
// are kept as rows and g^T Z^-1 g is evaluated through the t x t matrix
// lambda I + U U^T, whose Cholesky factor grows by one row per observation.
struct BanditState {
  SurrogateNet net;
  OptimizerState opt;
  ObservationHistory history;
  // Diagonal of Z; starts at lambda_reg, only grows.
  std::vector<double> cov_diag;
  CovarianceMode covariance = CovarianceMode::Full;
  // Row-major u_i, one row of param_count() entries per observation.
  std::vector<double> observed_features;
  // Packed lower-triangular factor; row i starts at i * (i + 1) / 2.
  std::vector<double> gram_cholesky;
  double lambda_reg = 0.1;
  double nu = 0.1;
  double feature_scale = 0.01;
  std::size_t iteration = 0;
  std::size_t local_iterations = 40;
  double learning_rate = 3e-4;
  // Empty means constant nu.
  NuSchedule nu_schedule;

  BanditState(SurrogateNet net, OptimizerState opt, double lambda_reg, double nu,
              double feature_scale);

  double current_nu() const { return nu_schedule ? nu_schedule(iteration) : nu; }
  std::size_t observed_count() const;
};

// Fresh state with the surrogate drawn from the given stream.
BanditState make_bandit_state(const ExperimentConfig& config, RngStream& rng);

// sqrt(feature_scale * sum_j g_j^2 / cov_diag_j).
double confidence_width(std::span<const double> features, std::span<const double> cov_diag,
                        double feature_scale);

// sqrt(feature_scale * g^T Z^-1 g) for the state's covariance mode; with a
// diagonal Z this is confidence_width.
double state_confidence_width(const BanditState& state, std::span<const double> features);

// Confidence width of the surrogate's parameter gradient at the latent.
double sigma(const BanditState& state, std::span<const double> latent);

double ucb_score(const BanditState& state, std::span<const double> latent);

// Draws from N(mu, (nu * sigma)^2).
double ts_sample(const BanditState& state, std::span<const double> latent,
                 RngStream& rng);

struct Selection {
  std::size_t index = 0;
  SoftPromptLatent latent;
};

// Index of the largest score, lowest index on ties. Throws
// std::invalid_argument on an empty span.
std::size_t argmax_lowest(std::span<const double> scores);

// Acquisition value of every pool entry (UCB or a posterior sample).
std::vector<double> acquisition_scores(const BanditState& state,
                                       const CandidatePool& pool, Policy policy,
                                       RngStream& rng);

// Uniformly random pool entry.
Selection select_uniform(const CandidatePool& pool, RngStream& rng);

// Uniform random index while the history is empty or under RandomSearch,
// otherwise the argmax of the policy's acquisition value.
Selection select_next(const BanditState& state, const CandidatePool& pool,
                      Policy policy, RngStream& rng);

// Adds the chosen point's gradient features to the design matrix, records
// the observation, retrains the surrogate and advances the iteration.
// Throws std::invalid_argument on a non-finite reward.
void update_posterior(BanditState& state, const SoftPromptLatent& chosen,
                      double reward);

// Adds the gradient features at the latent to the design matrix without
// retraining.
void accumulate_confidence(BanditState& state, std::span<const double> latent);

}  // namespace softbandit
