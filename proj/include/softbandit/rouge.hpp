#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace softbandit {

// Lowercased alphanumeric tokens.
using TokenSequence = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Lowercases ASCII letters and splits on maximal runs of non-alphanumeric
// bytes. No stemming, no stopword removal.
TokenSequence tokenize(std::string_view text);

// Clipped unigram overlap.
RougeScore rouge1(const TokenSequence& candidate, const TokenSequence& reference);

// Longest-common-subsequence F-measure with beta = 1.
RougeScore rougeL(const TokenSequence& candidate, const TokenSequence& reference);

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

// Mean of the ROUGE-1 and ROUGE-L F1 scores of the tokenized texts.
double avg_rouge_reward(std::string_view generated, std::string_view gold);

}  // namespace softbandit
