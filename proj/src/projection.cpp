#include "softbandit/projection.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace softbandit {

std::vector<std::vector<double>> SoftPrompt::token_rows(std::size_t num_tokens) const {
  if (num_tokens == 0 || values.size() % num_tokens != 0)
    throw std::invalid_argument("soft prompt of length " + std::to_string(values.size()) +
                                " cannot be split into " + std::to_string(num_tokens) +
                                " tokens");
  const std::size_t width = values.size() / num_tokens;
  std::vector<std::vector<double>> rows(num_tokens);
  for (std::size_t i = 0; i < num_tokens; ++i)
    rows[i].assign(values.begin() + static_cast<std::ptrdiff_t>(i * width),
                   values.begin() + static_cast<std::ptrdiff_t>((i + 1) * width));
  return rows;
}

SoftPrompt SoftPrompt::zeros(std::size_t num_tokens, std::size_t token_dim) {
  return SoftPrompt{std::vector<double>(num_tokens * token_dim, 0.0)};
}

ProjectionSpec::ProjectionSpec(std::size_t output_dim, std::size_t input_dim,
                               std::vector<double> row_major)
    : output_dim_(output_dim), input_dim_(input_dim), matrix_(std::move(row_major)) {
  if (output_dim_ == 0 || input_dim_ == 0)
    throw std::invalid_argument("projection dimensions must be >= 1");
  if (matrix_.size() != output_dim_ * input_dim_)
    throw std::invalid_argument("projection matrix has " + std::to_string(matrix_.size()) +
                                " entries, expected " +
                                std::to_string(output_dim_ * input_dim_));
  for (double v : matrix_)
    if (!(v >= -1.0 && v <= 1.0))
      throw std::invalid_argument("projection entries must lie in [-1, 1]");
}

ProjectionSpec make_projection(std::size_t d, std::size_t d_prime, RngStream& rng) {
  if (d == 0 || d_prime == 0)
    throw std::invalid_argument("make_projection: dimensions must be >= 1");
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> entries(d * d_prime);
  for (double& e : entries) e = uniform(rng);
  return ProjectionSpec(d, d_prime, std::move(entries));
}

SoftPrompt project(const ProjectionSpec& spec, std::span<const double> latent) {
  if (latent.size() != spec.input_dim())
    throw std::invalid_argument("project: latent has length " + std::to_string(latent.size()) +
                                ", projection expects " + std::to_string(spec.input_dim()));
  SoftPrompt out{std::vector<double>(spec.output_dim(), 0.0)};
  const auto a = spec.matrix();
  const std::size_t cols = spec.input_dim();
  for (std::size_t r = 0; r < spec.output_dim(); ++r) {
    const double* row = a.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * latent[c];
    out.values[r] = acc;
  }
  return out;
}

}  // namespace softbandit
