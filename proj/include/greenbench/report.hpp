// Survey artifacts computed from a fitted model: prevalence, dominant-topic
// evolution, topic co-occurrence and top documents per topic.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "greenbench/corpus.hpp"
#include "greenbench/lda.hpp"

namespace greenbench {

struct EvolutionRow {
  int year = 0;
  std::size_t topic = 0;
  std::size_t count = 0;

  bool operator==(const EvolutionRow&) const = default;
};

struct EvolutionTable {
  std::vector<EvolutionRow> rows;  // sorted by (year, topic); zero counts omitted
  std::size_t coverage = 0;        // documents with a known year
  std::size_t excluded = 0;        // documents without a year
};

/// Counts documents per (year, dominant topic).
EvolutionTable evolution_table(const Matrix& theta, const std::vector<TokenizedDoc>& docs);

inline constexpr double kDefaultCooccurrenceThreshold = 0.10;

struct CooccurrenceMatrix {
  std::size_t k = 0;
  double threshold = kDefaultCooccurrenceThreshold;
  std::vector<std::vector<std::size_t>> cells;  // symmetric, zero diagonal
};

/// For each document, every unordered pair of topics whose shares are both
/// strictly above `threshold` counts once.
CooccurrenceMatrix cooccurrence(const Matrix& theta, double threshold = kDefaultCooccurrenceThreshold);

struct RankedDoc {
  std::size_t doc_id = 0;
  double prob = 0.0;
};

struct TopDocuments {
  std::size_t m = 0;
  std::vector<std::vector<RankedDoc>> per_topic;
};

/// Per topic the `m` documents with the largest share, ties by lower doc_id.
/// Asking for more documents than exist returns all of them.
TopDocuments top_documents(const Matrix& theta, const std::vector<TokenizedDoc>& docs, std::size_t m);

struct PrevalenceRow {
  std::size_t topic = 0;
  std::string label;  // top three words
  double share = 0.0;
};

std::vector<PrevalenceRow> prevalence_table(const TopicModel& model, const Vocabulary& vocab,
                                            const std::vector<double>& shares);

}  // namespace greenbench
