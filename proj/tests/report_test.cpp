#include <doctest.h>

#include "greenbench/report.hpp"
#include "greenbench/rng.hpp"

using namespace greenbench;

namespace {

Matrix theta_of(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

std::vector<TokenizedDoc> docs_with_years(const std::vector<std::optional<int>>& years) {
  std::vector<TokenizedDoc> docs;
  for (std::size_t i = 0; i < years.size(); ++i) docs.push_back({i, {"x"}, years[i]});
  return docs;
}

}  // namespace

TEST_CASE("evolution table counts dominant topics per year") {
  const Matrix theta = theta_of({{0.6, 0.4}, {0.3, 0.7}, {0.9, 0.1}});
  const auto t = evolution_table(theta, docs_with_years({2020, 2020, 2021}));
  const std::vector<EvolutionRow> expected = {{2020, 0, 1}, {2020, 1, 1}, {2021, 0, 1}};
  CHECK(t.rows == expected);
  CHECK(t.coverage == 3);
  CHECK(t.excluded == 0);

  const auto missing = evolution_table(theta, docs_with_years({2020, std::nullopt, 2021}));
  CHECK(missing.coverage == 2);
  CHECK(missing.excluded == 1);
  CHECK(missing.rows.size() == 2);
}

TEST_CASE("evolution table invariants on random data") {
  Pcg32 rng(83);
  const std::size_t d = 300, k = 5;
  Matrix theta(d, k);
  std::vector<std::optional<int>> years;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) theta(i, j) = rng.uniform01();
    years.push_back(rng.bounded(5) == 0 ? std::nullopt : std::optional<int>(2015 + static_cast<int>(rng.bounded(10))));
  }
  const auto docs = docs_with_years(years);
  const auto t = evolution_table(theta, docs);
  CHECK(t.coverage + t.excluded == d);
  std::map<int, std::size_t> per_year, from_docs;
  for (const auto& r : t.rows) per_year[r.year] += r.count;
  for (const auto& doc : docs)
    if (doc.year) ++from_docs[*doc.year];
  CHECK(per_year == from_docs);
  CHECK(std::is_sorted(t.rows.begin(), t.rows.end(), [](const EvolutionRow& a, const EvolutionRow& b) {
    return std::pair(a.year, a.topic) < std::pair(b.year, b.topic);
  }));
}

TEST_CASE("co-occurrence uses a strict threshold") {
  const auto m = cooccurrence(theta_of({{0.5, 0.4, 0.1}}), 0.10);
  CHECK(m.cells[0][1] == 1);
  CHECK(m.cells[1][0] == 1);
  CHECK(m.cells[0][2] == 0);
  CHECK(m.cells[1][2] == 0);
  const auto none = cooccurrence(theta_of({{0.5, 0.4, 0.1}, {0.3, 0.3, 0.4}}), 0.99);
  for (const auto& row : none.cells)
    for (const auto c : row) CHECK(c == 0);
  CHECK(none.threshold == 0.99);
  CHECK_THROWS(cooccurrence(theta_of({{1.0}}), 1.0));
  CHECK_THROWS(cooccurrence(theta_of({{1.0}}), -0.1));
}

TEST_CASE("co-occurrence is symmetric with zero diagonal and bounded by D") {
  Pcg32 rng(89);
  const std::size_t d = 200, k = 6;
  Matrix theta(d, k);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += theta(i, j) = rng.uniform01();
    for (std::size_t j = 0; j < k; ++j) theta(i, j) /= s;
  }
  const auto m = cooccurrence(theta);
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(m.cells[i][i] == 0);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(m.cells[i][j] == m.cells[j][i]);
      CHECK(m.cells[i][j] <= d);
      std::size_t brute = 0;
      for (std::size_t r = 0; r < d; ++r) brute += i != j && theta(r, i) > 0.10 && theta(r, j) > 0.10;
      CHECK(m.cells[i][j] == brute);
    }
  }
}

TEST_CASE("top documents rank by share with doc id ties") {
  const Matrix theta = theta_of({{0.2, 0.8}, {0.9, 0.1}, {0.5, 0.5}, {0.5, 0.5}});
  const auto docs = docs_with_years({2020, 2021, 2022, 2023});
  const auto top = top_documents(theta, docs, 3);
  REQUIRE(top.per_topic.size() == 2);
  CHECK(top.per_topic[0].size() == 3);
  CHECK(top.per_topic[0][0].doc_id == 1);
  CHECK(top.per_topic[0][1].doc_id == 2);
  CHECK(top.per_topic[0][2].doc_id == 3);
  CHECK(top.per_topic[1][0].doc_id == 0);
  const auto all = top_documents(theta, docs, 10);
  CHECK(all.per_topic[0].size() == 4);
  CHECK_THROWS(top_documents(theta, docs, 0));
}

TEST_CASE("prevalence labels use the top three words") {
  const Corpus c = corpus_from_docs({{0, {"carbon", "energy", "grid", "solar"}, {}}});
  TopicModel m;
  m.phi = theta_of({{0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4}});
  const auto rows = prevalence_table(m, c.vocab, {0.25, 0.75});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "carbon, energy, grid");
  CHECK(rows[1].label == "solar, grid, energy");
  CHECK(rows[1].share == 0.75);
}
