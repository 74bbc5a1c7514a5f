#include "greenbench/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace greenbench {

double jaccard(const WordSet& a, const WordSet& b) {
  if (a.empty() && b.empty()) throw AlignError("Jaccard index of two empty sets is undefined");
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<WordSet> topic_word_sets(const TopicModel& model, const Vocabulary& vocab, std::size_t top_n) {
  std::vector<WordSet> sets;
  sets.reserve(model.num_topics());
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    WordSet s;
    for (const WordProb& wp : top_words(model, k, top_n)) s.insert(vocab.token(wp.id));
    sets.push_back(std::move(s));
  }
  return sets;
}

SimilarityMatrix similarity_matrix(const std::vector<WordSet>& topics_a, const std::vector<WordSet>& topics_b,
                                   std::size_t top_n) {
  if (topics_a.size() != topics_b.size()) {
    throw AlignError("topic models are compared only at a common K (got " + std::to_string(topics_a.size()) +
                     " and " + std::to_string(topics_b.size()) + ")");
  }
  SimilarityMatrix m;
  m.k = topics_a.size();
  m.top_n = top_n;
  m.cells.assign(m.k, std::vector<double>(m.k, 0.0));
  for (std::size_t i = 0; i < m.k; ++i) {
    for (std::size_t j = 0; j < m.k; ++j) m.cells[i][j] = jaccard(topics_a[i], topics_b[j]);
  }
  return m;
}

SimilarityMatrix similarity_matrix(const TopicModel& model_a, const Vocabulary& vocab_a,
                                   const TopicModel& model_b, const Vocabulary& vocab_b, std::size_t top_n) {
  if (model_a.num_topics() != model_b.num_topics()) {
    throw AlignError("topic models are compared only at a common K (got " +
                     std::to_string(model_a.num_topics()) + " and " + std::to_string(model_b.num_topics()) + ")");
  }
  if (!model_a.vocab_version.empty() && !model_b.vocab_version.empty() &&
      model_a.vocab_version != model_b.vocab_version) {
    throw AlignError("models were trained with different vocabulary versions");
  }
  return similarity_matrix(topic_word_sets(model_a, vocab_a, top_n), topic_word_sets(model_b, vocab_b, top_n),
                           top_n);
}

namespace {

using Cells = std::vector<std::vector<double>>;

// Minimum-cost assignment for a square cost matrix (shortest augmenting
// paths with row/column potentials, O(n^3)). Returns row -> column.
std::vector<std::size_t> min_cost_assignment(const Cells& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based internals; index 0 is the virtual unmatched row/column.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> match_col(n + 1, 0);  // column -> row
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match_col[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match_col[j] - 1] = j - 1;
  return row_to_col;
}

// Maximum total similarity over the sub-matrix of the given rows and columns.
double best_total(const Cells& cells, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                  double shift) {
  if (rows.empty()) return 0.0;
  Cells cost(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) cost[r][c] = shift - cells[rows[r]][cols[c]];
  }
  const auto assign = min_cost_assignment(cost);
  double total = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) total += cells[rows[r]][cols[assign[r]]];
  return total;
}

}  // namespace

Matching hungarian_max(const std::vector<std::vector<double>>& cells) {
  const std::size_t n = cells.size();
  double shift = 0.0;
  double scale = 1.0;
  for (const auto& row : cells) {
    if (row.size() != n) throw AlignError("similarity matrix must be square");
    for (const double x : row) {
      if (!std::isfinite(x)) throw AlignError("similarity matrix has non-finite entries");
      shift = std::max(shift, x);
      scale = std::max(scale, std::fabs(x));
    }
  }
  Matching m;
  if (n == 0) return m;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const double optimum = best_total(cells, all, all, shift);
  const double tol = 1e-12 * scale * static_cast<double>(n);

  // Fix rows in order, each to the smallest column that still admits an
  // optimal completion.
  std::vector<std::size_t> free_cols = all;
  double prefix = 0.0;
  m.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rest_rows(all.begin() + static_cast<std::ptrdiff_t>(i) + 1, all.end());
    bool fixed = false;
    for (std::size_t c = 0; c < free_cols.size(); ++c) {
      const std::size_t j = free_cols[c];
      std::vector<std::size_t> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(c));
      const double candidate = prefix + cells[i][j] + best_total(cells, rest_rows, rest_cols, shift);
      if (candidate >= optimum - tol) {
        m.permutation[i] = j;
        prefix += cells[i][j];
        free_cols = std::move(rest_cols);
        fixed = true;
        break;
      }
    }
    if (!fixed) throw AlignError("assignment tie-break failed to find an optimal completion");
  }
  for (std::size_t i = 0; i < n; ++i) m.total += cells[i][m.permutation[i]];
  m.mean_matched = m.total / static_cast<double>(n);
  return m;
}

Matching hungarian_max(const SimilarityMatrix& matrix) { return hungarian_max(matrix.cells); }

double mean_matched_jaccard(const TopicModel& model_a, const Vocabulary& vocab_a, const TopicModel& model_b,
                            const Vocabulary& vocab_b, std::size_t top_n) {
  return hungarian_max(similarity_matrix(model_a, vocab_a, model_b, vocab_b, top_n)).mean_matched;
}

}  // namespace greenbench
