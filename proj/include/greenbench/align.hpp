// Output-equivalence check between two topic models at a common K: Jaccard
// similarity of top-word sets and an optimal one-to-one topic matching.
#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenbench/lda.hpp"

namespace greenbench {

class AlignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using WordSet = std::set<std::string>;

double jaccard(const WordSet& a, const WordSet& b);

struct SimilarityMatrix {
  std::size_t k = 0;
  std::size_t top_n = 10;
  std::vector<std::vector<double>> cells;  // cells[i][j]: topic i of A vs topic j of B
};

struct Matching {
  std::vector<std::size_t> permutation;  // A topic i -> B topic permutation[i]
  double total = 0.0;                    // sum_i cells[i][permutation[i]] in row order
  double mean_matched = 0.0;
};

/// Top-n words of every topic as a set of surface forms.
std::vector<WordSet> topic_word_sets(const TopicModel& model, const Vocabulary& vocab, std::size_t top_n);

SimilarityMatrix similarity_matrix(const std::vector<WordSet>& topics_a, const std::vector<WordSet>& topics_b,
                                   std::size_t top_n);

/// Both models must share K and vocabulary; words are compared by surface form.
SimilarityMatrix similarity_matrix(const TopicModel& model_a, const Vocabulary& vocab_a,
                                   const TopicModel& model_b, const Vocabulary& vocab_b, std::size_t top_n = 10);

/// Maximum-weight perfect matching. Among optimal permutations the
/// lexicographically smallest is returned.
Matching hungarian_max(const std::vector<std::vector<double>>& cells);
Matching hungarian_max(const SimilarityMatrix& matrix);

double mean_matched_jaccard(const TopicModel& model_a, const Vocabulary& vocab_a, const TopicModel& model_b,
                            const Vocabulary& vocab_b, std::size_t top_n = 10);

}  // namespace greenbench
