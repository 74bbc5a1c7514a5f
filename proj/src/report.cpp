#include "greenbench/report.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace greenbench {

EvolutionTable evolution_table(const Matrix& theta, const std::vector<TokenizedDoc>& docs) {
  if (theta.rows() != docs.size()) throw std::invalid_argument("theta rows do not match documents");
  std::map<std::pair<int, std::size_t>, std::size_t> counts;
  EvolutionTable table;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!docs[d].year) {
      ++table.excluded;
      continue;
    }
    ++table.coverage;
    ++counts[{*docs[d].year, dominant_topic(theta.row(d))}];
  }
  table.rows.reserve(counts.size());
  for (const auto& [key, n] : counts) table.rows.push_back({key.first, key.second, n});
  return table;
}

CooccurrenceMatrix cooccurrence(const Matrix& theta, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) throw std::invalid_argument("threshold must be in [0, 1)");
  CooccurrenceMatrix m;
  m.k = theta.cols();
  m.threshold = threshold;
  m.cells.assign(m.k, std::vector<std::size_t>(m.k, 0));
  std::vector<std::size_t> present;
  for (std::size_t d = 0; d < theta.rows(); ++d) {
    present.clear();
    for (std::size_t k = 0; k < m.k; ++k) {
      if (theta(d, k) > threshold) present.push_back(k);
    }
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        ++m.cells[present[a]][present[b]];
        ++m.cells[present[b]][present[a]];
      }
    }
  }
  return m;
}

TopDocuments top_documents(const Matrix& theta, const std::vector<TokenizedDoc>& docs, std::size_t m) {
  if (m < 1) throw std::invalid_argument("top_documents needs m >= 1");
  if (theta.rows() != docs.size()) throw std::invalid_argument("theta rows do not match documents");
  TopDocuments out;
  out.m = std::min(m, docs.size());
  out.per_topic.resize(theta.cols());
  for (std::size_t k = 0; k < theta.cols(); ++k) {
    std::vector<RankedDoc> ranked(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) ranked[d] = {docs[d].doc_id, theta(d, k)};
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(out.m), ranked.end(),
                      [](const RankedDoc& a, const RankedDoc& b) {
                        if (a.prob != b.prob) return a.prob > b.prob;
                        return a.doc_id < b.doc_id;
                      });
    ranked.resize(out.m);
    out.per_topic[k] = std::move(ranked);
  }
  return out;
}

std::vector<PrevalenceRow> prevalence_table(const TopicModel& model, const Vocabulary& vocab,
                                            const std::vector<double>& shares) {
  if (shares.size() != model.num_topics()) throw std::invalid_argument("one share per topic required");
  std::vector<PrevalenceRow> rows;
  const std::size_t n_label = std::min<std::size_t>(3, model.vocab_size());
  for (std::size_t k = 0; k < shares.size(); ++k) {
    std::string label;
    for (const WordProb& wp : top_words(model, k, n_label)) {
      if (!label.empty()) label += ", ";
      label += vocab.token(wp.id);
    }
    rows.push_back({k, std::move(label), shares[k]});
  }
  return rows;
}

}  // namespace greenbench
