#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softbandit/config.hpp"
#include "softbandit/projection.hpp"
#include "softbandit/rng.hpp"

namespace softbandit {

struct CandidatePool {
  std::vector<SoftPromptLatent> candidates;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  const SoftPromptLatent& operator[](std::size_t i) const { return candidates[i]; }
};

// Halton sequence with independent random digit permutations per dimension
// and digit position. Points lie in [0, 1)^dim.
class ScrambledHalton {
 public:
  ScrambledHalton(std::size_t dim, RngStream& rng);

  std::size_t dim() const { return bases_.size(); }
  void point(std::uint64_t index, std::span<double> out) const;

 private:
  std::vector<std::uint32_t> bases_;
  // permutations_[j][k] permutes the k-th digit of dimension j.
  std::vector<std::vector<std::vector<std::uint32_t>>> permutations_;
};

// Produces the per-iteration candidate pool over [-1, 1]^d'. The scramble is
// fixed by the stream; iteration t consumes sequence indices
// [t * pool_size, (t + 1) * pool_size).
class CandidateSampler {
 public:
  CandidateSampler(std::size_t dim, std::size_t pool_size, RngStream rng);

  CandidatePool pool(std::size_t t) const;

 private:
  std::size_t pool_size_;
  ScrambledHalton halton_;
};

CandidatePool gen_candidates(const ExperimentConfig& config, const RngStream& rng,
                             std::size_t t);

// First `count` primes.
std::vector<std::uint32_t> first_primes(std::size_t count);

}  // namespace softbandit
