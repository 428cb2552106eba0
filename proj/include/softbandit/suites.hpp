#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "softbandit/config.hpp"
#include "softbandit/profiles.hpp"

namespace softbandit {

// A named family of synthetic profiles with a matching config preset.
struct SyntheticSuite {
  std::string id;
  ExperimentConfig config;
  std::size_t profile_count = 0;
};

// Known ids: "small", "standard". Throws ConfigError otherwise.
SyntheticSuite synthetic_suite(std::string_view id);

// Profiles named "<suite>-000", "<suite>-001", ... with no text examples.
std::vector<UserProfile> synthetic_profiles(std::string_view suite_id,
                                            std::size_t count);

}  // namespace softbandit
