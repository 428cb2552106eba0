#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softbandit/rng.hpp"

namespace softbandit {

// The optimized low-dimensional point z'.
struct SoftPromptLatent {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::span<const double> span() const { return values; }
  operator std::span<const double>() const { return values; }

  bool operator==(const SoftPromptLatent&) const = default;
};

// Full soft prompt z = A z', laid out token-major: token i occupies
// values[i * token_dim, (i + 1) * token_dim).
struct SoftPrompt {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  // Reshapes into num_tokens rows. Throws std::invalid_argument when the
  // length is not divisible by num_tokens.
  std::vector<std::vector<double>> token_rows(std::size_t num_tokens) const;

  static SoftPrompt zeros(std::size_t num_tokens, std::size_t token_dim);

  bool operator==(const SoftPrompt&) const = default;
};

// Dense output_dim x input_dim matrix, row-major, entries in [-1, 1].
class ProjectionSpec {
 public:
  ProjectionSpec(std::size_t output_dim, std::size_t input_dim,
                 std::vector<double> row_major);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  double at(std::size_t row, std::size_t col) const {
    return matrix_[row * input_dim_ + col];
  }
  std::span<const double> matrix() const { return matrix_; }

  bool operator==(const ProjectionSpec&) const = default;

 private:
  std::size_t output_dim_;
  std::size_t input_dim_;
  std::vector<double> matrix_;
};

// Entries drawn i.i.d. Uniform(-1, 1) in row-major order. Throws
// std::invalid_argument on a zero dimension.
ProjectionSpec make_projection(std::size_t d, std::size_t d_prime, RngStream& rng);

// z = A z'. Throws std::invalid_argument on a length mismatch.
SoftPrompt project(const ProjectionSpec& spec, std::span<const double> latent);

}  // namespace softbandit
