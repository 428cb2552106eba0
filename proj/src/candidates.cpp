#include "softbandit/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace softbandit {

std::vector<std::uint32_t> first_primes(std::size_t count) {
  std::vector<std::uint32_t> primes;
  primes.reserve(count);
  for (std::uint32_t n = 2; primes.size() < count; ++n) {
    bool prime = true;
    for (std::uint32_t p : primes) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(n);
  }
  return primes;
}

ScrambledHalton::ScrambledHalton(std::size_t dim, RngStream& rng)
    : bases_(first_primes(dim)), permutations_(dim) {
  for (std::size_t j = 0; j < dim; ++j) {
    const std::uint32_t base = bases_[j];
    // Enough digits to exhaust double precision.
    const auto digits = static_cast<std::size_t>(
        std::ceil(52.0 / std::log2(static_cast<double>(base))));
    auto& perms = permutations_[j];
    perms.resize(digits);
    for (auto& perm : perms) {
      perm.resize(base);
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin(), perm.end(), rng);
    }
  }
}

void ScrambledHalton::point(std::uint64_t index, std::span<double> out) const {
  if (out.size() != bases_.size())
    throw std::invalid_argument("ScrambledHalton::point: output has wrong dimension");
  constexpr double kBelowOne = 1.0 - 0x1p-53;
  for (std::size_t j = 0; j < bases_.size(); ++j) {
    const std::uint64_t base = bases_[j];
    const double inv_base = 1.0 / static_cast<double>(base);
    double scale = inv_base;
    double value = 0.0;
    std::uint64_t rest = index;
    for (const auto& perm : permutations_[j]) {
      value += perm[rest % base] * scale;
      rest /= base;
      scale *= inv_base;
    }
    out[j] = std::min(value, kBelowOne);
  }
}

CandidateSampler::CandidateSampler(std::size_t dim, std::size_t pool_size, RngStream rng)
    : pool_size_(pool_size), halton_(dim, rng) {}

CandidatePool CandidateSampler::pool(std::size_t t) const {
  CandidatePool pool;
  pool.candidates.reserve(pool_size_);
  const std::uint64_t first = static_cast<std::uint64_t>(t) * pool_size_;
  for (std::size_t i = 0; i < pool_size_; ++i) {
    SoftPromptLatent latent{std::vector<double>(halton_.dim())};
    halton_.point(first + i, latent.values);
    for (double& v : latent.values) v = 2.0 * v - 1.0;
    pool.candidates.push_back(std::move(latent));
  }
  return pool;
}

CandidatePool gen_candidates(const ExperimentConfig& config, const RngStream& rng,
                             std::size_t t) {
  return CandidateSampler(config.intrinsic_dim, config.candidate_pool_size, rng).pool(t);
}

}  // namespace softbandit
