#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "softbandit/config.hpp"

namespace softbandit {

using RngStream = std::mt19937_64;

enum class StreamPurpose { Projection, Candidates, Surrogate, Policy, Oracle };

// Hashes (seed, profile id, purpose) into a 64-bit substream seed.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view profile_id,
                             StreamPurpose purpose);

RngStream derive_rng_stream(const ExperimentConfig& config,
                            std::string_view profile_id, StreamPurpose purpose);

}  // namespace softbandit
