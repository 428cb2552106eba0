#include "softbandit/rng.hpp"

namespace softbandit {
namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::string_view profile_id,
                             StreamPurpose purpose) {
  std::uint64_t id_hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : profile_id) {
    id_hash ^= c;
    id_hash *= 0x100000001b3ULL;
  }
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ id_hash);
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) + 1));
  return h;
}

RngStream derive_rng_stream(const ExperimentConfig& config,
                            std::string_view profile_id, StreamPurpose purpose) {
  return RngStream(substream_seed(config.seed, profile_id, purpose));
}

}  // namespace softbandit
