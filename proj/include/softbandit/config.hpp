#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace softbandit {

enum class Policy { NeuralUCB, NeuralTS, RandomSearch };

// Lowercase identifier used in files and on the command line.
std::string_view to_string(Policy policy);
// Case-insensitive; accepts "neuralucb", "neuralts", "random", "randomsearch".
Policy parse_policy(std::string_view name);

// Full: exact design matrix lambda*I + sum of scaled gradient outer products.
// Diagonal: only its diagonal, cheaper but much slower to shrink.
enum class CovarianceMode { Full, Diagonal };

std::string_view to_string(CovarianceMode mode);
CovarianceMode parse_covariance_mode(std::string_view name);

// Reward is exp(-||B z' - w||^2 / temperature) over a randomly drawn landscape.
// With compose_projection the landscape is evaluated on the projected prompt.
struct SyntheticOracle {
  std::size_t rank = 4;
  double temperature = 0.3;
  bool compose_projection = false;

  bool operator==(const SyntheticOracle&) const = default;
};

// Reward is the averaged ROUGE-1/L F1 of text produced by a generation service.
struct RemoteOracle {
  std::string endpoint = "http://127.0.0.1:8080";
  std::string instruction =
      "Generate a personalized response for the following input.";
  std::int64_t timeout_ms = 30000;

  bool operator==(const RemoteOracle&) const = default;
};

using RewardOracle = std::variant<SyntheticOracle, RemoteOracle>;

struct ExperimentConfig {
  std::size_t intrinsic_dim = 100;
  std::size_t num_soft_tokens = 5;
  std::size_t token_dim = 4096;
  double lambda_reg = 0.1;
  double nu = 0.1;
  std::size_t total_iterations = 165;
  std::size_t hidden_dim = 100;
  std::size_t local_iterations = 40;
  double learning_rate = 3e-4;
  std::size_t candidate_pool_size = 500;
  Policy policy = Policy::NeuralUCB;
  std::uint64_t seed = 42;
  // Unset means 1 / hidden_dim.
  std::optional<double> feature_scale;
  CovarianceMode covariance = CovarianceMode::Full;
  RewardOracle reward_oracle = SyntheticOracle{};

  // Full soft-prompt dimension d = token_dim * num_soft_tokens.
  std::size_t soft_prompt_dim() const { return token_dim * num_soft_tokens; }
  double effective_feature_scale() const;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses a flat JSON object keyed by field name. Missing keys keep their
// defaults, unknown keys are rejected. Throws ConfigError.
ExperimentConfig load_config(std::string_view document);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Canonical JSON form; load_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

// 16 hex digits identifying the serialized config.
std::string config_fingerprint(const ExperimentConfig& config);

}  // namespace softbandit
