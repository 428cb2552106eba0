#include "softbandit/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace softbandit {
namespace {

RougeScore from_overlap(std::size_t overlap, std::size_t candidate_len,
                        std::size_t reference_len) {
  RougeScore s;
  if (candidate_len > 0) s.precision = static_cast<double>(overlap) / candidate_len;
  if (reference_len > 0) s.recall = static_cast<double>(overlap) / reference_len;
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

RougeScore rouge1(const TokenSequence& candidate, const TokenSequence& reference) {
  std::unordered_map<std::string_view, std::size_t> ref_counts;
  for (const auto& tok : reference) ++ref_counts[tok];
  std::size_t overlap = 0;
  for (const auto& tok : candidate) {
    auto it = ref_counts.find(tok);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return from_overlap(overlap, candidate.size(), reference.size());
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

RougeScore rougeL(const TokenSequence& candidate, const TokenSequence& reference) {
  return from_overlap(lcs_length(candidate, reference), candidate.size(), reference.size());
}

double avg_rouge_reward(std::string_view generated, std::string_view gold) {
  const auto cand = tokenize(generated);
  const auto ref = tokenize(gold);
  return 0.5 * (rouge1(cand, ref).f1 + rougeL(cand, ref).f1);
}

}  // namespace softbandit
