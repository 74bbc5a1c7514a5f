// Synthetic corpora drawn from the LDA generative process, used as oracles for
// topic recovery and to produce the bundled sample corpus.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "greenbench/corpus.hpp"
#include "greenbench/lda.hpp"

namespace greenbench {

struct SynthConfig {
  std::size_t k_true = 5;
  std::size_t vocab_size = 500;
  std::size_t n_docs = 2000;
  std::size_t doc_len = 60;
  double alpha = 0.1;
  double beta = 0.05;
  std::uint64_t seed = 42;
  std::size_t min_tokens = 5;
  /// When set, topic k only places mass on the k-th contiguous block of the
  /// vocabulary (plus `leakage` spread uniformly over all words).
  bool disjoint_blocks = false;
  double leakage = 0.0;
  /// Year range for generated records; [first_year, last_year] inclusive.
  int first_year = 2015;
  int last_year = 2025;
};

struct SyntheticCorpus {
  std::vector<TokenizedDoc> docs;
  std::vector<std::string> words;      // planted id -> surface form
  std::vector<std::size_t> block_of;   // planted id -> block (disjoint mode)
  TopicModel planted;                  // phi over planted ids, theta per doc
};

/// Surface form for a synthetic word id: lowercase letters only, never a
/// stopword, and unchanged by preprocessing with the bundled assets.
std::string synthetic_word(std::size_t id);

SyntheticCorpus generate_synthetic(const SynthConfig& config);

/// Turns a synthetic corpus into CSV-ready records: the first few tokens
/// become the title, the rest the abstract, and each document gets a year.
std::vector<RawRecord> synthetic_records(const SyntheticCorpus& corpus, const SynthConfig& config);

}  // namespace greenbench
