#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "greenbench/diagnostics.hpp"
#include "greenbench/rng.hpp"
#include "greenbench/synth.hpp"

using namespace greenbench;

namespace {

// Brute-force UMass straight from the raw token lists.
std::vector<double> umass_oracle(const Matrix& phi, const std::vector<TokenizedDoc>& docs,
                                 const Vocabulary& vocab, std::size_t top_n, double eps) {
  std::vector<std::set<std::string>> doc_sets;
  for (const auto& d : docs) doc_sets.emplace_back(d.tokens.begin(), d.tokens.end());
  std::vector<double> scores;
  for (std::size_t k = 0; k < phi.rows(); ++k) {
    std::vector<std::size_t> order(phi.cols());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (phi(k, a) != phi(k, b)) return phi(k, a) > phi(k, b);
      return a < b;
    });
    double s = 0.0;
    for (std::size_t i = 0; i < top_n; ++i) {
      for (std::size_t j = i + 1; j < top_n; ++j) {
        const std::string& wi = vocab.token(static_cast<TokenId>(order[i]));
        const std::string& wj = vocab.token(static_cast<TokenId>(order[j]));
        double di = 0.0, dij = 0.0;
        for (const auto& set : doc_sets) {
          const bool has_i = set.count(wi) > 0;
          di += has_i;
          dij += has_i && set.count(wj) > 0;
        }
        s += std::log((dij + eps) / di);
      }
    }
    scores.push_back(s);
  }
  return scores;
}

// Brute-force perplexity, one token occurrence at a time.
double perplexity_oracle(const Matrix& phi, const Matrix& theta, const std::vector<TokenizedDoc>& docs,
                         const Vocabulary& vocab) {
  long double log_sum = 0.0L;
  long double n = 0.0L;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& tok : docs[d].tokens) {
      const std::size_t w = *vocab.id(tok);
      long double p = 0.0L;
      for (std::size_t k = 0; k < phi.rows(); ++k) p += static_cast<long double>(theta(d, k)) * phi(k, w);
      log_sum += std::log(p);
      n += 1.0L;
    }
  }
  return static_cast<double>(std::exp(-log_sum / n));
}

Matrix random_stochastic(std::size_t rows, std::size_t cols, Pcg32& rng) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = 0.05 + rng.uniform01();
      sum += m(r, c);
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) /= sum;
  }
  return m;
}

Corpus toy_corpus() {
  return corpus_from_docs({
      {0, {"carbon", "energy", "grid", "carbon"}, {}},
      {1, {"energy", "gpu", "training"}, {}},
      {2, {"grid", "solar", "carbon", "policy"}, {}},
      {3, {"gpu", "training", "model", "energy"}, {}},
      {4, {"policy", "carbon", "solar"}, {}},
  });
}

}  // namespace

TEST_CASE("coherence pair bounds") {
  // Perfect co-occurrence: both words in every document.
  const Corpus all = corpus_from_docs({{0, {"a", "b"}, {}}, {1, {"a", "b"}, {}}, {2, {"b", "a", "c"}, {}}});
  TopicModel m;
  m.phi = Matrix(1, 3);
  m.phi(0, *all.vocab.id("a")) = 0.6;
  m.phi(0, *all.vocab.id("b")) = 0.3;
  m.phi(0, *all.vocab.id("c")) = 0.1;
  const auto r = umass_coherence(m, all.vocab, 2);
  CHECK(r.per_topic[0] == doctest::Approx(std::log1p(1e-12 / 3.0)).epsilon(1e-12));

  // Never co-occurring, D(w_i) = 10.
  std::vector<TokenizedDoc> docs;
  for (std::size_t d = 0; d < 10; ++d) docs.push_back({d, {"x"}, {}});
  docs.push_back({10, {"y"}, {}});
  const Corpus apart = corpus_from_docs(docs);
  TopicModel m2;
  m2.phi = Matrix(1, 2);
  m2.phi(0, *apart.vocab.id("x")) = 0.7;
  m2.phi(0, *apart.vocab.id("y")) = 0.3;
  CHECK(umass_coherence(m2, apart.vocab, 2).per_topic[0] == doctest::Approx(std::log(1e-12 / 10.0)));
}

TEST_CASE("coherence matches the brute-force oracle on toy corpora") {
  const Corpus c = toy_corpus();
  Pcg32 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    TopicModel m;
    const std::size_t k = 1 + rng.bounded(4);
    m.phi = random_stochastic(k, c.vocab.size(), rng);
    for (const std::size_t top_n : {2u, 3u, 5u}) {
      const auto r = umass_coherence(m, c.vocab, top_n);
      const auto oracle = umass_oracle(m.phi, c.docs, c.vocab, top_n, 1e-12);
      REQUIRE(r.per_topic.size() == k);
      double sum = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        CHECK(std::abs(r.per_topic[t] - oracle[t]) <= 1e-9);
        sum += r.per_topic[t];
        const double pairs = static_cast<double>(top_n * (top_n - 1) / 2);
        CHECK(r.per_topic[t] <= pairs * std::log1p(1e-12) + 1e-15);
      }
      CHECK(std::abs(r.mean - sum / static_cast<double>(k)) <= 1e-12);
    }
  }
}

TEST_CASE("coherence on a trained model: K=2, top 3, against the oracle") {
  const Corpus c = toy_corpus();
  LdaHyperparams h;
  h.k = 2;
  const TopicModel m = train(c.bow, c.vocab, h);
  const auto r = umass_coherence(m, c.vocab, 3);
  const auto oracle = umass_oracle(m.phi, c.docs, c.vocab, 3, 1e-12);
  for (std::size_t t = 0; t < 2; ++t) CHECK(std::abs(r.per_topic[t] - oracle[t]) <= 1e-12);
}

TEST_CASE("coherence is permutation-equivariant over topics") {
  const Corpus c = toy_corpus();
  Pcg32 rng(23);
  TopicModel m;
  m.phi = random_stochastic(4, c.vocab.size(), rng);
  const auto base = umass_coherence(m, c.vocab, 4);
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  TopicModel p;
  p.phi = Matrix(4, c.vocab.size());
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t w = 0; w < c.vocab.size(); ++w) p.phi(t, w) = m.phi(perm[t], w);
  const auto permuted = umass_coherence(p, c.vocab, 4);
  for (std::size_t t = 0; t < 4; ++t) CHECK(permuted.per_topic[t] == base.per_topic[perm[t]]);
  CHECK(permuted.mean == doctest::Approx(base.mean).epsilon(1e-15));
}

TEST_CASE("coherence errors") {
  const Corpus c = toy_corpus();
  TopicModel m;
  m.phi = Matrix(1, c.vocab.size(), 1.0 / static_cast<double>(c.vocab.size()));
  CHECK_THROWS(umass_coherence(m, c.vocab, 1));
  CHECK_THROWS(umass_coherence(m, c.vocab, c.vocab.size() + 1));
}

TEST_CASE("perplexity closed forms") {
  for (const std::size_t v : {1u, 2u, 4u, 7u, 10u, 64u, 100u, 1000u}) {
    std::vector<TokenizedDoc> docs;
    for (std::size_t w = 0; w < v; ++w) docs.push_back({w, {"t" + std::to_string(w), "t0"}, {}});
    const Corpus c = corpus_from_docs(docs);
    TopicModel m;
    m.phi = Matrix(1, v, 1.0 / static_cast<double>(v));
    m.theta = Matrix(v, 1, 1.0);
    CHECK(perplexity(m, c.bow) == static_cast<double>(v));
  }
  // For any V the result is the exact reciprocal of the stored probability.
  for (std::size_t v = 1; v <= 300; ++v) {
    std::vector<TokenizedDoc> docs;
    for (std::size_t w = 0; w < v; ++w) docs.push_back({w, {"t" + std::to_string(w), "t0", "t0"}, {}});
    const Corpus c = corpus_from_docs(docs);
    TopicModel m;
    const double p = 1.0 / static_cast<double>(v);
    m.phi = Matrix(1, v, p);
    m.theta = Matrix(v, 1, 1.0);
    CHECK(perplexity(m, c.bow) == 1.0 / p);
  }

  // One document, one token, mixture probability 0.5.
  const Corpus one = corpus_from_docs({{0, {"a"}, {}}, {1, {"b"}, {}}});
  TopicModel m;
  m.phi = Matrix(2, 2);
  m.phi(0, 0) = 1.0;
  m.phi(1, 1) = 1.0;
  m.theta = Matrix(1, 2, 0.5);
  CHECK(perplexity_with_theta(m, m.theta, {one.bow[0]}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("perplexity matches the brute-force oracle") {
  const Corpus c = toy_corpus();
  Pcg32 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k = 1 + rng.bounded(4);
    TopicModel m;
    m.phi = random_stochastic(k, c.vocab.size(), rng);
    m.theta = random_stochastic(c.docs.size(), k, rng);
    const double got = perplexity(m, c.bow);
    const double want = perplexity_oracle(m.phi, m.theta, c.docs, c.vocab);
    CHECK(std::abs(got - want) / want <= 1e-9);
  }
}

TEST_CASE("held-out perplexity uses fold-in") {
  const Corpus c = toy_corpus();
  LdaHyperparams h;
  h.k = 2;
  const TopicModel m = train(c.bow, c.vocab, h);
  const double held = perplexity(m, c.bow, ThetaSource::fold_in);
  CHECK(held > 0.0);
  CHECK(held == perplexity_with_theta(m, fold_in(m, c.bow), c.bow));
  CHECK_THROWS(perplexity(m, {c.bow[0]}));
  CHECK_THROWS(perplexity(m, {}));
}

TEST_CASE("more topics never fit a separated corpus worse than the unigram") {
  SynthConfig cfg;
  cfg.k_true = 3;
  cfg.vocab_size = 150;
  cfg.n_docs = 300;
  cfg.disjoint_blocks = true;
  const Corpus c = corpus_from_docs(generate_synthetic(cfg).docs);
  LdaHyperparams h;
  h.k = 1;
  const double unigram = perplexity(train(c.bow, c.vocab, h), c.bow);
  for (const std::size_t k : {2u, 3u, 4u}) {
    h.k = k;
    CHECK(perplexity(train(c.bow, c.vocab, h), c.bow) <= unigram * (1.0 + 1e-9));
  }
}

TEST_CASE("token share") {
  const Corpus c = toy_corpus();
  TopicModel one;
  one.phi = Matrix(1, c.vocab.size(), 1.0 / static_cast<double>(c.vocab.size()));
  one.theta = Matrix(c.docs.size(), 1, 1.0);
  const auto s1 = token_share(one, c.bow);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0] == doctest::Approx(1.0).epsilon(1e-15));

  Pcg32 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + rng.bounded(5);
    TopicModel m;
    m.phi = random_stochastic(k, c.vocab.size(), rng);
    m.theta = random_stochastic(c.docs.size(), k, rng);
    const auto s = token_share(m, c.bow);
    CHECK(std::abs(std::accumulate(s.begin(), s.end(), 0.0) - 1.0) <= 1e-9);
  }
}

TEST_CASE("token share of a mirrored two-topic model is even") {
  // Words come in pairs (u_i, v_i); topic 0 favours u, topic 1 mirrors it on v.
  // Every document has a mirror twin with u and v swapped and theta swapped.
  Pcg32 rng(37);
  const std::size_t pairs = 6;
  std::vector<TokenizedDoc> docs;
  std::vector<std::pair<double, double>> thetas;
  for (std::size_t d = 0; d < 10; ++d) {
    TokenizedDoc a{2 * d, {}, {}}, b{2 * d + 1, {}, {}};
    const std::size_t len = 3 + rng.bounded(6);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t w = rng.bounded(pairs);
      const bool u = rng.bounded(2) == 0;
      a.tokens.push_back((u ? "u" : "v") + std::to_string(w));
      b.tokens.push_back((u ? "v" : "u") + std::to_string(w));
    }
    docs.push_back(a);
    docs.push_back(b);
    const double t = 0.1 + 0.8 * rng.uniform01();
    thetas.push_back({t, 1.0 - t});
    thetas.push_back({1.0 - t, t});
  }
  const Corpus c = corpus_from_docs(docs);
  std::vector<double> weight(pairs);
  double total = 0.0;
  for (double& w : weight) total += (w = 0.2 + rng.uniform01());
  TopicModel m;
  m.phi = Matrix(2, c.vocab.size());
  for (std::size_t w = 0; w < pairs; ++w) {
    const auto u = c.vocab.id("u" + std::to_string(w));
    const auto v = c.vocab.id("v" + std::to_string(w));
    if (!u || !v) continue;
    m.phi(0, *u) = 0.8 * weight[w];
    m.phi(0, *v) = 0.2 * weight[w];
    m.phi(1, *u) = 0.2 * weight[w];
    m.phi(1, *v) = 0.8 * weight[w];
  }
  for (std::size_t k = 0; k < 2; ++k) {
    double sum = 0.0;
    for (std::size_t w = 0; w < c.vocab.size(); ++w) sum += m.phi(k, w);
    for (std::size_t w = 0; w < c.vocab.size(); ++w) m.phi(k, w) /= sum;
  }
  m.theta = Matrix(docs.size(), 2);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    m.theta(d, 0) = thetas[d].first;
    m.theta(d, 1) = thetas[d].second;
  }
  const auto s = token_share(m, c.bow);
  CHECK(std::abs(s[0] - 0.5) <= 1e-6);
  CHECK(std::abs(s[1] - 0.5) <= 1e-6);
}
