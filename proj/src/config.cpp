#include "softbandit/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "softbandit/errors.hpp"

namespace softbandit {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T>
std::string describe(const T& value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

[[noreturn]] void fail(std::string_view field, const std::string& message) {
  throw ConfigError(std::string(field) + ": " + message);
}

std::size_t read_count(const json& value, std::string_view field) {
  if (!value.is_number_integer()) fail(field, "expected a non-negative integer, got " + value.dump());
  if (value.is_number_unsigned()) return value.get<std::size_t>();
  const auto v = value.get<std::int64_t>();
  if (v < 0) fail(field, "expected a non-negative integer, got " + value.dump());
  return static_cast<std::size_t>(v);
}

double read_real(const json& value, std::string_view field) {
  if (!value.is_number()) fail(field, "expected a number, got " + value.dump());
  return value.get<double>();
}

SyntheticOracle read_synthetic(const json& doc) {
  SyntheticOracle oracle;
  for (const auto& [key, value] : doc.items()) {
    if (key == "kind") continue;
    if (key == "rank") {
      oracle.rank = read_count(value, "reward_oracle.rank");
    } else if (key == "temperature") {
      oracle.temperature = read_real(value, "reward_oracle.temperature");
    } else if (key == "compose_projection") {
      if (!value.is_boolean()) fail("reward_oracle.compose_projection", "expected a boolean");
      oracle.compose_projection = value.get<bool>();
    } else {
      fail("reward_oracle." + key, "unknown key for synthetic oracle");
    }
  }
  return oracle;
}

RemoteOracle read_remote(const json& doc) {
  RemoteOracle oracle;
  for (const auto& [key, value] : doc.items()) {
    if (key == "kind") continue;
    if (key == "endpoint" || key == "instruction") {
      if (!value.is_string()) fail("reward_oracle." + key, "expected a string");
      (key == "endpoint" ? oracle.endpoint : oracle.instruction) = value.get<std::string>();
    } else if (key == "timeout_ms") {
      if (!value.is_number_integer()) fail("reward_oracle.timeout_ms", "expected an integer");
      oracle.timeout_ms = value.get<std::int64_t>();
    } else {
      fail("reward_oracle." + key, "unknown key for remote oracle");
    }
  }
  return oracle;
}

RewardOracle read_oracle(const json& doc) {
  if (!doc.is_object()) fail("reward_oracle", "expected an object");
  const auto kind = doc.find("kind");
  if (kind == doc.end() || !kind->is_string()) fail("reward_oracle.kind", "missing or not a string");
  const auto name = kind->get<std::string>();
  if (name == "synthetic") return read_synthetic(doc);
  if (name == "remote") return read_remote(doc);
  fail("reward_oracle.kind", "expected \"synthetic\" or \"remote\", got \"" + name + "\"");
}

}  // namespace

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::NeuralUCB:
      return "neuralucb";
    case Policy::NeuralTS:
      return "neuralts";
    case Policy::RandomSearch:
      return "random";
  }
  return "unknown";
}

Policy parse_policy(std::string_view name) {
  const auto key = lower(name);
  if (key == "neuralucb") return Policy::NeuralUCB;
  if (key == "neuralts") return Policy::NeuralTS;
  if (key == "random" || key == "randomsearch") return Policy::RandomSearch;
  throw ConfigError("policy: unknown policy \"" + std::string(name) + "\"");
}

std::string_view to_string(CovarianceMode mode) {
  return mode == CovarianceMode::Full ? "full" : "diagonal";
}

CovarianceMode parse_covariance_mode(std::string_view name) {
  const auto key = lower(name);
  if (key == "full") return CovarianceMode::Full;
  if (key == "diagonal") return CovarianceMode::Diagonal;
  throw ConfigError("covariance: expected \"full\" or \"diagonal\", got \"" + std::string(name) + "\"");
}

double ExperimentConfig::effective_feature_scale() const {
  return feature_scale ? *feature_scale : 1.0 / static_cast<double>(hidden_dim);
}

void ExperimentConfig::validate() const {
  const auto positive = [](std::string_view field, std::size_t v) {
    if (v < 1) fail(field, "must be >= 1 (got " + describe(v) + ")");
  };
  positive("intrinsic_dim", intrinsic_dim);
  positive("num_soft_tokens", num_soft_tokens);
  positive("token_dim", token_dim);
  positive("total_iterations", total_iterations);
  positive("hidden_dim", hidden_dim);
  positive("local_iterations", local_iterations);
  positive("candidate_pool_size", candidate_pool_size);
  if (!(lambda_reg > 0.0) || !std::isfinite(lambda_reg))
    fail("lambda_reg", "must be > 0 (got " + describe(lambda_reg) + ")");
  if (!(nu >= 0.0) || !std::isfinite(nu))
    fail("nu", "must be >= 0 (got " + describe(nu) + ")");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    fail("learning_rate", "must be > 0 (got " + describe(learning_rate) + ")");
  if (feature_scale && (!(*feature_scale > 0.0) || !std::isfinite(*feature_scale)))
    fail("feature_scale", "must be > 0 (got " + describe(*feature_scale) + ")");
  if (const auto* s = std::get_if<SyntheticOracle>(&reward_oracle)) {
    if (s->rank < 1) fail("reward_oracle.rank", "must be >= 1 (got " + describe(s->rank) + ")");
    if (!(s->temperature > 0.0) || !std::isfinite(s->temperature))
      fail("reward_oracle.temperature", "must be > 0 (got " + describe(s->temperature) + ")");
  } else {
    const auto& r = std::get<RemoteOracle>(reward_oracle);
    if (r.endpoint.empty()) fail("reward_oracle.endpoint", "must not be empty");
    if (r.timeout_ms <= 0)
      fail("reward_oracle.timeout_ms", "must be > 0 (got " + describe(r.timeout_ms) + ")");
  }
}

ExperimentConfig load_config(std::string_view document) {
  const bool blank = std::all_of(document.begin(), document.end(),
                                 [](unsigned char c) { return std::isspace(c); });
  json doc = json::object();
  if (!blank) {
    try {
      doc = json::parse(document);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: parse error: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");

  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "intrinsic_dim") {
      config.intrinsic_dim = read_count(value, key);
    } else if (key == "num_soft_tokens") {
      config.num_soft_tokens = read_count(value, key);
    } else if (key == "token_dim") {
      config.token_dim = read_count(value, key);
    } else if (key == "lambda_reg") {
      config.lambda_reg = read_real(value, key);
    } else if (key == "nu") {
      config.nu = read_real(value, key);
    } else if (key == "total_iterations") {
      config.total_iterations = read_count(value, key);
    } else if (key == "hidden_dim") {
      config.hidden_dim = read_count(value, key);
    } else if (key == "local_iterations") {
      config.local_iterations = read_count(value, key);
    } else if (key == "learning_rate") {
      config.learning_rate = read_real(value, key);
    } else if (key == "candidate_pool_size") {
      config.candidate_pool_size = read_count(value, key);
    } else if (key == "policy") {
      if (!value.is_string()) fail(key, "expected a string");
      config.policy = parse_policy(value.get<std::string>());
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) fail(key, "expected an unsigned 64-bit integer");
      config.seed = value.get<std::uint64_t>();
    } else if (key == "feature_scale") {
      if (value.is_null()) {
        config.feature_scale.reset();
      } else {
        config.feature_scale = read_real(value, key);
      }
    } else if (key == "covariance") {
      if (!value.is_string()) fail(key, "expected a string");
      config.covariance = parse_covariance_mode(value.get<std::string>());
    } else if (key == "reward_oracle") {
      config.reward_oracle = read_oracle(value);
    } else {
      fail(key, "unknown configuration key");
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  ordered_json doc;
  doc["intrinsic_dim"] = config.intrinsic_dim;
  doc["num_soft_tokens"] = config.num_soft_tokens;
  doc["token_dim"] = config.token_dim;
  doc["lambda_reg"] = config.lambda_reg;
  doc["nu"] = config.nu;
  doc["total_iterations"] = config.total_iterations;
  doc["hidden_dim"] = config.hidden_dim;
  doc["local_iterations"] = config.local_iterations;
  doc["learning_rate"] = config.learning_rate;
  doc["candidate_pool_size"] = config.candidate_pool_size;
  doc["policy"] = std::string(to_string(config.policy));
  doc["seed"] = config.seed;
  doc["feature_scale"] = config.feature_scale ? ordered_json(*config.feature_scale)
                                              : ordered_json(nullptr);
  doc["covariance"] = std::string(to_string(config.covariance));
  ordered_json oracle;
  if (const auto* s = std::get_if<SyntheticOracle>(&config.reward_oracle)) {
    oracle["kind"] = "synthetic";
    oracle["rank"] = s->rank;
    oracle["temperature"] = s->temperature;
    oracle["compose_projection"] = s->compose_projection;
  } else {
    const auto& r = std::get<RemoteOracle>(config.reward_oracle);
    oracle["kind"] = "remote";
    oracle["endpoint"] = r.endpoint;
    oracle["instruction"] = r.instruction;
    oracle["timeout_ms"] = r.timeout_ms;
  }
  doc["reward_oracle"] = std::move(oracle);
  return doc.dump(2);
}

std::string config_fingerprint(const ExperimentConfig& config) {
  // FNV-1a, 64-bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace softbandit
