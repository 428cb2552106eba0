#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softbandit/config.hpp"
#include "softbandit/projection.hpp"
#include "softbandit/rng.hpp"

namespace softbandit {

// Hidden preference landscape r(x) = exp(-||B x - w||^2 / temperature).
struct SyntheticLandscape {
  std::size_t rank = 0;       // rows of B
  std::size_t input_dim = 0;  // columns of B
  std::vector<double> preference;  // B, row-major
  std::vector<double> target;      // w
  double temperature = 1.0;
  // When set, x is the projected soft prompt rather than the latent.
  bool compose_projection = false;
};

// Draws B with N(0, 1/d') entries and sets w = B z* for a hidden optimum z*
// inside [-0.8, 0.8]^d'. With compose_projection, B acts on the d-dimensional
// prompt, w = B A z*, and B is scaled so that B A has the same entry variance;
// the projection is then required.
SyntheticLandscape make_landscape(const ExperimentConfig& config,
                                  const SyntheticOracle& oracle, RngStream& rng,
                                  const ProjectionSpec* projection = nullptr);

// Throws std::invalid_argument when point.size() != landscape.input_dim.
double synthetic_reward(const SyntheticLandscape& landscape,
                        std::span<const double> point);

}  // namespace softbandit
