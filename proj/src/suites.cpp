#include "softbandit/suites.hpp"

#include <cstdio>

#include "softbandit/errors.hpp"

namespace softbandit {

SyntheticSuite synthetic_suite(std::string_view id) {
  SyntheticSuite suite;
  suite.id = std::string(id);
  ExperimentConfig& c = suite.config;
  c.token_dim = 16;
  c.reward_oracle = SyntheticOracle{};
  if (id == "small") {
    c.intrinsic_dim = 4;
    c.num_soft_tokens = 2;
    c.total_iterations = 30;
    c.hidden_dim = 32;
    c.candidate_pool_size = 100;
    suite.profile_count = 4;
  } else if (id == "standard") {
    c.intrinsic_dim = 10;
    suite.profile_count = 20;
  } else {
    throw ConfigError("synthetic suite: unknown id \"" + std::string(id) +
                      "\" (expected \"small\" or \"standard\")");
  }
  c.validate();
  return suite;
}

std::vector<UserProfile> synthetic_profiles(std::string_view suite_id, std::size_t count) {
  std::vector<UserProfile> profiles;
  profiles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char index[24];
    std::snprintf(index, sizeof index, "%03zu", i);
    profiles.push_back(UserProfile{std::string(suite_id) + "-" + index, "synthetic", {}});
  }
  return profiles;
}

}  // namespace softbandit
