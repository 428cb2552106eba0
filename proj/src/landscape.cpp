#include "softbandit/landscape.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace softbandit {

SyntheticLandscape make_landscape(const ExperimentConfig& config,
                                  const SyntheticOracle& oracle, RngStream& rng,
                                  const ProjectionSpec* projection) {
  const std::size_t latent_dim = config.intrinsic_dim;
  SyntheticLandscape land;
  land.rank = oracle.rank;
  land.temperature = oracle.temperature;
  land.compose_projection = oracle.compose_projection;

  double stddev = 1.0 / std::sqrt(static_cast<double>(latent_dim));
  if (oracle.compose_projection) {
    if (projection == nullptr)
      throw std::invalid_argument("make_landscape: composed landscape needs a projection");
    if (projection->input_dim() != latent_dim)
      throw std::invalid_argument("make_landscape: projection input dimension mismatch");
    land.input_dim = projection->output_dim();
    // Var((B A)_ij) = d * Var(B) / 3 for Uniform(-1, 1) entries of A.
    stddev = std::sqrt(3.0 / (static_cast<double>(land.input_dim) * latent_dim));
  } else {
    land.input_dim = latent_dim;
  }

  std::normal_distribution<double> gauss(0.0, stddev);
  land.preference.resize(land.rank * land.input_dim);
  for (double& b : land.preference) b = gauss(rng);

  std::uniform_real_distribution<double> box(-0.8, 0.8);
  std::vector<double> optimum(latent_dim);
  for (double& z : optimum) z = box(rng);
  const std::vector<double> point =
      oracle.compose_projection ? project(*projection, optimum).values : optimum;

  land.target.assign(land.rank, 0.0);
  for (std::size_t r = 0; r < land.rank; ++r) {
    const double* row = land.preference.data() + r * land.input_dim;
    double acc = 0.0;
    for (std::size_t c = 0; c < land.input_dim; ++c) acc += row[c] * point[c];
    land.target[r] = acc;
  }
  return land;
}

double synthetic_reward(const SyntheticLandscape& landscape, std::span<const double> point) {
  if (point.size() != landscape.input_dim)
    throw std::invalid_argument("synthetic_reward: point has length " +
                                std::to_string(point.size()) + ", landscape expects " +
                                std::to_string(landscape.input_dim));
  double sq = 0.0;
  for (std::size_t r = 0; r < landscape.rank; ++r) {
    const double* row = landscape.preference.data() + r * landscape.input_dim;
    double acc = 0.0;
    for (std::size_t c = 0; c < landscape.input_dim; ++c) acc += row[c] * point[c];
    const double diff = acc - landscape.target[r];
    sq += diff * diff;
  }
  return std::exp(-sq / landscape.temperature);
}

}  // namespace softbandit
