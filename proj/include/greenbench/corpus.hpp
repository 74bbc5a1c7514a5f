// Abstract-level corpus ingestion: CSV loading, deterministic preprocessing,
// vocabulary construction and bag-of-words conversion.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace greenbench {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawRecord {
  std::optional<std::string> title;
  std::string abstract;
  std::optional<int> year;
};

/// A fixed word list loaded from a bundled asset. `version` comes from the
/// asset's `# version: ...` header line.
struct StopwordList {
  std::string version;
  std::unordered_set<std::string> words;

  bool contains(std::string_view w) const { return words.count(std::string(w)) > 0; }
};

/// Surface form to lemma lookup. Tokens absent from the table pass through.
struct LemmaTable {
  std::string version;
  std::unordered_map<std::string, std::string> lemmas;

  const std::string& lemmatize(const std::string& token) const {
    const auto it = lemmas.find(token);
    return it == lemmas.end() ? token : it->second;
  }
};

StopwordList parse_stopwords(std::string_view text);
LemmaTable parse_lemmas(std::string_view text);

/// The stopword list and lemma table compiled into the library from assets/.
const StopwordList& bundled_stopwords();
const LemmaTable& bundled_lemmas();

struct PreprocessConfig {
  std::size_t min_tokens = 5;
  const StopwordList* stopwords = &bundled_stopwords();
  const LemmaTable* lemmas = &bundled_lemmas();

  /// "<stopword version>+<lemma version>", recorded in manifests.
  std::string asset_version() const;
};

struct CsvSchema {
  std::string title = "title";
  std::string abstract = "abstract";
  std::string year = "year";
};

struct LoadResult {
  std::vector<RawRecord> records;
  std::size_t dropped = 0;  // missing, empty or placeholder abstracts
};

/// Abstracts treated as missing (compared case-insensitively after trimming).
const std::vector<std::string>& placeholder_abstracts();
bool is_placeholder_abstract(std::string_view abstract);

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
LoadResult parse_records(std::string_view csv_text, const CsvSchema& schema = {});

std::string compose_text(const RawRecord& record);

/// Lowercase, strip URLs, replace punctuation and digits by spaces, split on
/// whitespace, drop stopwords, lemmatize. Steps run in exactly that order.
std::vector<std::string> preprocess(std::string_view text, const PreprocessConfig& config);

struct TokenizedDoc {
  std::size_t doc_id = 0;
  std::vector<std::string> tokens;
  std::optional<int> year;
};

using TokenId = std::uint32_t;

struct BowDoc {
  std::size_t doc_id = 0;
  std::map<TokenId, std::uint32_t> counts;

  std::size_t length() const;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds ids in order of first appearance across `docs`.
  static Vocabulary build(const std::vector<TokenizedDoc>& docs);

  std::size_t size() const { return tokens_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::optional<TokenId> id(std::string_view token) const;

  std::size_t doc_freq(TokenId id) const { return postings_.at(id).size(); }
  /// Number of documents containing both tokens; computed on demand.
  std::size_t co_doc_freq(TokenId a, TokenId b) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::vector<std::uint32_t>> postings_;  // sorted doc indices per token
  std::size_t num_docs_ = 0;
};

struct Corpus {
  std::vector<TokenizedDoc> docs;
  Vocabulary vocab;
  std::vector<BowDoc> bow;
  std::size_t dropped_short = 0;
  std::size_t total_tokens = 0;

  /// FNV-1a over the token stream and years; identifies the analysed input.
  std::uint64_t fingerprint() const;
};

Corpus build_corpus(const std::vector<RawRecord>& records, const PreprocessConfig& config);

/// Builds vocabulary and bag-of-words for already-tokenized documents.
Corpus corpus_from_docs(std::vector<TokenizedDoc> docs);

}  // namespace greenbench
