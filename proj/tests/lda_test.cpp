#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "greenbench/align.hpp"
#include "greenbench/lda.hpp"
#include "greenbench/rng.hpp"
#include "greenbench/synth.hpp"

using namespace greenbench;

namespace {

Corpus small_corpus() {
  return corpus_from_docs({
      {0, {"solar", "grid", "carbon", "grid", "energy"}, 2020},
      {1, {"model", "training", "gpu", "energy", "model"}, 2021},
      {2, {"solar", "carbon", "carbon", "grid", "policy"}, 2021},
      {3, {"gpu", "training", "model", "inference", "latency"}, 2022},
      {4, {"policy", "carbon", "grid", "solar", "energy"}, 2022},
      {5, {"inference", "latency", "gpu", "model", "training"}, 2023},
  });
}

void check_row_stochastic(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (const double x : m.row(r)) {
      CHECK(x > 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

std::vector<WordSet> planted_word_sets(const SyntheticCorpus& s, std::size_t top_n) {
  std::vector<WordSet> out;
  for (std::size_t k = 0; k < s.planted.num_topics(); ++k) {
    std::vector<std::size_t> ids(s.words.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    const auto row = s.planted.phi.row(k);
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    WordSet set;
    for (std::size_t i = 0; i < top_n; ++i) set.insert(s.words[ids[i]]);
    out.push_back(set);
  }
  return out;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  LdaHyperparams h;
  CHECK(h.effective_alpha() == doctest::Approx(1.0 / 7.0));
  CHECK_NOTHROW(h.validate());
  h.k = 0;
  CHECK_THROWS_AS(h.validate(), LdaError);
  h = {};
  h.beta = 0.0;
  CHECK_THROWS_AS(h.validate(), LdaError);
  h = {};
  h.alpha = -1.0;  // non-positive means 1/k
  CHECK_NOTHROW(h.validate());
  h.sweeps = 0;
  CHECK_THROWS_AS(h.validate(), LdaError);
}

TEST_CASE("single topic: theta is all ones and phi is the smoothed unigram") {
  const Corpus c = small_corpus();
  LdaHyperparams h;
  h.k = 1;
  const TopicModel m = train(c.bow, c.vocab, h);
  REQUIRE(m.theta.rows() == c.bow.size());
  for (std::size_t d = 0; d < m.num_docs(); ++d) CHECK(m.theta(d, 0) == 1.0);
  const double v = static_cast<double>(c.vocab.size());
  std::vector<double> counts(c.vocab.size(), 0.0);
  for (const auto& doc : c.bow)
    for (const auto& [id, n] : doc.counts) counts[id] += n;
  const double total = static_cast<double>(c.total_tokens);
  for (std::size_t w = 0; w < c.vocab.size(); ++w) {
    CHECK(std::abs(m.phi(0, w) - (counts[w] + h.beta) / (total + v * h.beta)) <= 1e-12);
  }
}

TEST_CASE("training is deterministic and row-stochastic") {
  const Corpus c = small_corpus();
  LdaHyperparams h;
  h.k = 3;
  const TopicModel a = train(c.bow, c.vocab, h, "v1");
  const TopicModel b = train(c.bow, c.vocab, h, "v1");
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  CHECK(a.phi.rows() == 3);
  CHECK(a.phi.cols() == c.vocab.size());
  CHECK(a.theta.cols() == 3);
  CHECK(a.meta.sweeps == h.sweeps);
  CHECK(a.meta.log_likelihood.size() == h.sweeps);
  check_row_stochastic(a.phi);
  check_row_stochastic(a.theta);

  h.seed = 43;
  const TopicModel other = train(c.bow, c.vocab, h, "v1");
  check_row_stochastic(other.phi);
}

TEST_CASE("row-stochastic for many K and seeds") {
  const Corpus c = small_corpus();
  for (std::size_t k = 1; k <= 12; ++k) {
    LdaHyperparams h;
    h.k = k;
    h.seed = 100 + k;
    const TopicModel m = train(c.bow, c.vocab, h);
    check_row_stochastic(m.phi);
    check_row_stochastic(m.theta);
    CHECK(m.meta.warnings.empty() == (k <= c.vocab.size()));
  }
}

TEST_CASE("training errors") {
  const Corpus c = small_corpus();
  CHECK_THROWS_AS(train({}, c.vocab, LdaHyperparams{}), LdaError);
  std::vector<BowDoc> bad = c.bow;
  bad[0].counts[static_cast<TokenId>(c.vocab.size() + 3)] = 1;
  CHECK_THROWS_AS(train(bad, c.vocab, LdaHyperparams{}), LdaError);
}

TEST_CASE("duplicating every document leaves the single-topic phi unchanged") {
  // Count proportionality only holds exactly once the prior is negligible;
  // with one topic the sampler has no randomness left to diverge.
  const Corpus c = small_corpus();
  std::vector<TokenizedDoc> doubled = c.docs;
  for (const auto& d : c.docs) doubled.push_back({doubled.size(), d.tokens, d.year});
  const Corpus c2 = corpus_from_docs(doubled);
  LdaHyperparams h;
  h.k = 1;
  h.beta = 1e-7;
  const TopicModel a = train(c.bow, c.vocab, h);
  const TopicModel b = train(c2.bow, c2.vocab, h);
  for (std::size_t w = 0; w < c.vocab.size(); ++w) CHECK(std::abs(a.phi(0, w) - b.phi(0, w)) <= 1e-6);
}

TEST_CASE("top_words ordering and ties") {
  TopicModel m;
  m.phi = Matrix(2, 3);
  m.phi(0, 0) = 0.5;
  m.phi(0, 1) = 0.3;
  m.phi(0, 2) = 0.2;
  m.phi(1, 0) = 0.2;
  m.phi(1, 1) = 0.4;
  m.phi(1, 2) = 0.4;
  const auto top = top_words(m, 0, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].id == 0);
  CHECK(top[0].prob == 0.5);
  CHECK(top[1].id == 1);
  CHECK(top[1].prob == 0.3);
  const auto tied = top_words(m, 1, 3);
  CHECK(tied[0].id == 1);
  CHECK(tied[1].id == 2);
  CHECK(tied[2].id == 0);
  CHECK_THROWS_AS(top_words(m, 2, 1), LdaError);
  CHECK_THROWS_AS(top_words(m, 0, 4), LdaError);
}

TEST_CASE("dominant_topic") {
  CHECK(dominant_topic(std::vector<double>{0.1, 0.7, 0.2}) == 1);
  CHECK(dominant_topic(std::vector<double>{0.5, 0.5}) == 0);
  CHECK(dominant_topic(std::vector<double>(6, 1.0 / 6.0)) == 0);
  CHECK_THROWS_AS(dominant_topic(std::vector<double>{0.5, NAN}), LdaError);

  Pcg32 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> row(1 + rng.bounded(8));
    for (double& x : row) x = static_cast<double>(rng.bounded(5));
    const std::size_t base = dominant_topic(row);
    for (const double scale : {0.25, 3.0, 1024.0}) {
      std::vector<double> scaled = row;
      for (double& x : scaled) x *= scale;
      CHECK(dominant_topic(scaled) == base);
    }
  }
}

TEST_CASE("model JSON round trip") {
  const Corpus c = small_corpus();
  LdaHyperparams h;
  h.k = 2;
  const TopicModel m = train(c.bow, c.vocab, h, "en-stop-1+en-lemma-1");
  const TopicModel back = model_from_json(model_to_json(m));
  CHECK(back.phi == m.phi);
  CHECK(back.theta == m.theta);
  CHECK(back.hyper.k == 2);
  CHECK(back.hyper.seed == h.seed);
  CHECK(back.vocab_version == m.vocab_version);
  CHECK(model_to_json(back) == model_to_json(m));
  CHECK_THROWS_AS(model_from_json("{\"format_version\": 99}"), LdaError);
  CHECK_THROWS_AS(model_from_json("not json"), LdaError);
}

TEST_CASE("fold-in is deterministic and independent of batch composition") {
  const Corpus c = small_corpus();
  LdaHyperparams h;
  h.k = 2;
  h.per_doc_iterations = 50;
  const TopicModel m = train(c.bow, c.vocab, h);
  const Matrix all = fold_in(m, c.bow);
  check_row_stochastic(all);
  CHECK(fold_in(m, c.bow) == all);
  const Matrix first = fold_in(m, {c.bow[0]});
  for (std::size_t k = 0; k < 2; ++k) CHECK(first(0, k) == all(0, k));
}

TEST_CASE("synthetic corpora: degenerate K, determinism, vocabulary hygiene") {
  SynthConfig cfg;
  cfg.k_true = 1;
  cfg.n_docs = 50;
  cfg.vocab_size = 40;
  const SyntheticCorpus one = generate_synthetic(cfg);
  for (std::size_t d = 0; d < one.planted.num_docs(); ++d) CHECK(one.planted.theta(d, 0) == 1.0);

  cfg.k_true = 4;
  const SyntheticCorpus a = generate_synthetic(cfg);
  const SyntheticCorpus b = generate_synthetic(cfg);
  REQUIRE(a.docs.size() == b.docs.size());
  for (std::size_t d = 0; d < a.docs.size(); ++d) CHECK(a.docs[d].tokens == b.docs[d].tokens);
  CHECK(a.planted.phi == b.planted.phi);

  std::set<std::string> seen;
  const PreprocessConfig pc;
  for (std::size_t id = 0; id < 3000; ++id) {
    const std::string w = synthetic_word(id);
    CHECK(seen.insert(w).second);
    CHECK(preprocess(w, pc) == std::vector<std::string>{w});
  }

  cfg.k_true = 0;
  CHECK_THROWS(generate_synthetic(cfg));
  cfg.k_true = 50;
  CHECK_THROWS(generate_synthetic(cfg));
}

TEST_CASE("disjoint planted topics: block membership follows planted theta") {
  SynthConfig cfg;
  cfg.k_true = 3;
  cfg.vocab_size = 300;
  cfg.n_docs = 800;
  cfg.doc_len = 60;
  cfg.disjoint_blocks = true;
  const SyntheticCorpus s = generate_synthetic(cfg);
  std::map<std::string, std::size_t> block_of_word;
  for (std::size_t i = 0; i < s.words.size(); ++i) block_of_word[s.words[i]] = s.block_of[i];

  std::vector<double> observed(3, 0.0), expected(3, 0.0);
  double total = 0.0;
  for (std::size_t d = 0; d < s.docs.size(); ++d) {
    for (const auto& t : s.docs[d].tokens) {
      REQUIRE(block_of_word.count(t));
      observed[block_of_word[t]] += 1.0;
    }
    for (std::size_t k = 0; k < 3; ++k) expected[k] += s.planted.theta(d, k) * s.docs[d].tokens.size();
    total += s.docs[d].tokens.size();
  }
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(observed[k] - expected[k]) / total < 0.01);

  // Every planted topic puts (almost) all of its mass on its own block.
  for (std::size_t k = 0; k < 3; ++k) {
    double in_block = 0.0;
    for (std::size_t w = 0; w < s.words.size(); ++w) in_block += s.block_of[w] == k ? s.planted.phi(k, w) : 0.0;
    CHECK(in_block > 0.999);
  }
}

TEST_CASE("trained topics recover three planted disjoint topics") {
  SynthConfig cfg;
  cfg.k_true = 3;
  cfg.vocab_size = 300;
  cfg.n_docs = 600;
  cfg.disjoint_blocks = true;
  const SyntheticCorpus s = generate_synthetic(cfg);
  const Corpus c = corpus_from_docs(s.docs);
  LdaHyperparams h;
  h.k = 3;
  const TopicModel m = train(c.bow, c.vocab, h);
  const auto sim = similarity_matrix(topic_word_sets(m, c.vocab, 10), planted_word_sets(s, 10), 10);
  CHECK(hungarian_max(sim).mean_matched >= 0.6);
}
