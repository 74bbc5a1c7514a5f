#include "greenbench/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "greenbench/csv.hpp"

namespace greenbench {

namespace assets {
extern const std::string_view kStopwordsText;
extern const std::string_view kLemmasText;
}  // namespace assets

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Iterates the non-comment lines of an asset file and records the version header.
template <typename OnEntry>
std::string for_each_asset_line(std::string_view text, OnEntry&& on_entry) {
  std::string version = "unversioned";
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kTag = "# version:";
      if (line.substr(0, kTag.size()) == kTag) version = std::string(trim(line.substr(kTag.size())));
      continue;
    }
    on_entry(line);
  }
  return version;
}

// --- UTF-8 helpers for the preprocessing pipeline -----------------------------

constexpr char32_t kReplacement = 0xFFFD;

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 uppercase block, excluding the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  // Latin Extended-A pairs uppercase/lowercase on even/odd code points.
  if (cp >= 0x100 && cp <= 0x17F && cp % 2 == 0 && cp != 0x130 && cp != 0x138) return cp + 1;
  return cp;
}

bool is_whitespace(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v' ||
         cp == 0xA0;
}

// Letters that survive punctuation/digit removal: ASCII a-z and the Latin-1
// and Latin Extended-A/B lowercase range.
bool is_word_char(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  if (cp >= 0xDF && cp <= 0xFF && cp != 0xF7) return true;
  return cp >= 0x100 && cp <= 0x24F;
}

bool starts_with_at(const std::u32string& s, std::size_t i, std::u32string_view prefix) {
  return s.size() - i >= prefix.size() && std::u32string_view(s).substr(i, prefix.size()) == prefix;
}

}  // namespace

StopwordList parse_stopwords(std::string_view text) {
  StopwordList list;
  list.version = for_each_asset_line(text, [&](std::string_view line) {
    list.words.insert(ascii_lower(line));
  });
  return list;
}

LemmaTable parse_lemmas(std::string_view text) {
  LemmaTable table;
  table.version = for_each_asset_line(text, [&](std::string_view line) {
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw CorpusError("lemma table entry without lemma: " + std::string(line));
    }
    const std::string surface = ascii_lower(trim(line.substr(0, sep)));
    const std::string lemma = ascii_lower(trim(line.substr(sep + 1)));
    table.lemmas[surface] = lemma;
  });
  return table;
}

const StopwordList& bundled_stopwords() {
  static const StopwordList list = parse_stopwords(assets::kStopwordsText);
  return list;
}

const LemmaTable& bundled_lemmas() {
  static const LemmaTable table = parse_lemmas(assets::kLemmasText);
  return table;
}

std::string PreprocessConfig::asset_version() const {
  return (stopwords ? stopwords->version : std::string("none")) + "+" +
         (lemmas ? lemmas->version : std::string("none"));
}

const std::vector<std::string>& placeholder_abstracts() {
  static const std::vector<std::string> list = {
      "no abstract available",
      "no abstract",
      "abstract not available",
      "n/a",
      "na",
      "none",
      "null",
      "[no abstract available]",
      "-",
  };
  return list;
}

bool is_placeholder_abstract(std::string_view abstract) {
  const std::string_view t = trim(abstract);
  if (t.empty()) return true;
  const std::string lower = ascii_lower(t);
  const auto& list = placeholder_abstracts();
  return std::find(list.begin(), list.end(), lower) != list.end();
}

LoadResult parse_records(std::string_view csv_text, const CsvSchema& schema) {
  const std::vector<csv::Row> rows = csv::parse(csv_text);
  if (rows.empty()) throw CorpusError("CSV has no header row");

  const auto& header = rows.front().fields;
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      std::string h = ascii_lower(trim(header[i]));
      // Tolerate a UTF-8 byte order mark on the first header cell.
      if (i == 0 && h.rfind("\xEF\xBB\xBF", 0) == 0) h.erase(0, 3);
      if (h == ascii_lower(name)) return i;
    }
    return std::nullopt;
  };
  const auto title_col = column(schema.title);
  const auto abstract_col = column(schema.abstract);
  const auto year_col = column(schema.year);
  if (!title_col) throw CorpusError("missing required column '" + schema.title + "'");
  if (!abstract_col) throw CorpusError("missing required column '" + schema.abstract + "'");
  if (!year_col) throw CorpusError("missing required column '" + schema.year + "'");

  LoadResult result;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw CorpusError("malformed row at line " + std::to_string(row.line) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(row.fields.size()));
    }
    const std::string& abstract = row.fields[*abstract_col];
    if (is_placeholder_abstract(abstract)) {
      ++result.dropped;
      continue;
    }
    RawRecord rec;
    rec.abstract = std::string(trim(abstract));
    const std::string_view title = trim(row.fields[*title_col]);
    if (!title.empty()) rec.title = std::string(title);
    const std::string_view year = trim(row.fields[*year_col]);
    if (!year.empty()) {
      int value = 0;
      // Accept "2021" and spreadsheet-style "2021.0".
      const std::string_view digits = year.substr(0, year.find('.'));
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      const bool fractional_ok =
          year.find('.') == std::string_view::npos ||
          year.substr(year.find('.') + 1).find_first_not_of('0') == std::string_view::npos;
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || !fractional_ok) {
        throw CorpusError("malformed row at line " + std::to_string(row.line) +
                          ": year is not an integer: '" + std::string(year) + "'");
      }
      if (value < 1900 || value > 2100) {
        throw CorpusError("malformed row at line " + std::to_string(row.line) +
                          ": year out of range [1900, 2100]: " + std::to_string(value));
      }
      rec.year = value;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read CSV file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_records(buf.str(), schema);
  } catch (const csv::ParseError& e) {
    throw CorpusError(path.string() + ": malformed CSV at " + e.what());
  }
}

std::string compose_text(const RawRecord& record) {
  if (record.title && !trim(*record.title).empty()) return *record.title + " " + record.abstract;
  return record.abstract;
}

std::vector<std::string> preprocess(std::string_view text, const PreprocessConfig& config) {
  std::u32string cps = decode_utf8(text);

  for (char32_t& cp : cps) cp = to_lower(cp);

  // URLs: a maximal run of non-whitespace starting at one of the prefixes.
  static constexpr std::u32string_view kUrlPrefixes[] = {U"http://", U"https://", U"www."};
  for (std::size_t i = 0; i < cps.size();) {
    const bool url = std::any_of(std::begin(kUrlPrefixes), std::end(kUrlPrefixes),
                                 [&](std::u32string_view p) { return starts_with_at(cps, i, p); });
    if (!url) {
      ++i;
      continue;
    }
    while (i < cps.size() && !is_whitespace(cps[i])) cps[i++] = U' ';
  }

  for (char32_t& cp : cps) {
    if (!is_word_char(cp)) cp = U' ';
  }

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (config.stopwords == nullptr || !config.stopwords->contains(current)) {
      tokens.push_back(config.lemmas ? config.lemmas->lemmatize(current) : current);
    }
    current.clear();
  };
  for (const char32_t cp : cps) {
    if (cp == U' ') {
      flush();
    } else {
      append_utf8(current, cp);
    }
  }
  flush();
  return tokens;
}

std::size_t BowDoc::length() const {
  std::size_t n = 0;
  for (const auto& [id, c] : counts) n += c;
  return n;
}

Vocabulary Vocabulary::build(const std::vector<TokenizedDoc>& docs) {
  Vocabulary v;
  v.num_docs_ = docs.size();
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& tok : docs[d].tokens) {
      auto [it, inserted] = v.ids_.try_emplace(tok, static_cast<TokenId>(v.tokens_.size()));
      if (inserted) {
        v.tokens_.push_back(tok);
        v.postings_.emplace_back();
      }
      auto& posting = v.postings_[it->second];
      if (posting.empty() || posting.back() != d) posting.push_back(static_cast<std::uint32_t>(d));
    }
  }
  return v;
}

std::optional<TokenId> Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::co_doc_freq(TokenId a, TokenId b) const {
  const auto& pa = postings_.at(a);
  const auto& pb = postings_.at(b);
  std::size_t n = 0;
  auto ia = pa.begin();
  auto ib = pb.begin();
  while (ia != pa.end() && ib != pb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

std::uint64_t Corpus::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view bytes) {
    for (const char c : bytes) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  };
  for (const TokenizedDoc& doc : docs) {
    mix(doc.year ? std::to_string(*doc.year) : std::string("-"));
    mix("\x1e");
    for (const std::string& t : doc.tokens) {
      mix(t);
      mix("\x1f");
    }
    mix("\x1d");
  }
  return h;
}

Corpus corpus_from_docs(std::vector<TokenizedDoc> docs) {
  if (docs.empty()) throw CorpusError("empty corpus: no documents retained");
  Corpus corpus;
  corpus.docs = std::move(docs);
  corpus.vocab = Vocabulary::build(corpus.docs);
  corpus.bow.reserve(corpus.docs.size());
  for (const TokenizedDoc& doc : corpus.docs) {
    BowDoc bow;
    bow.doc_id = doc.doc_id;
    for (const std::string& tok : doc.tokens) ++bow.counts[*corpus.vocab.id(tok)];
    corpus.total_tokens += doc.tokens.size();
    corpus.bow.push_back(std::move(bow));
  }
  return corpus;
}

Corpus build_corpus(const std::vector<RawRecord>& records, const PreprocessConfig& config) {
  if (records.empty()) throw CorpusError("no records to build a corpus from");
  if (config.min_tokens < 1) throw CorpusError("min_tokens must be at least 1");
  std::vector<TokenizedDoc> docs;
  std::size_t dropped = 0;
  for (const RawRecord& rec : records) {
    std::vector<std::string> tokens = preprocess(compose_text(rec), config);
    if (tokens.size() < config.min_tokens) {
      ++dropped;
      continue;
    }
    docs.push_back(TokenizedDoc{docs.size(), std::move(tokens), rec.year});
  }
  if (docs.empty()) {
    throw CorpusError("empty corpus: all " + std::to_string(records.size()) +
                      " documents fell below min_tokens=" + std::to_string(config.min_tokens));
  }
  Corpus corpus = corpus_from_docs(std::move(docs));
  corpus.dropped_short = dropped;
  return corpus;
}

}  // namespace greenbench
