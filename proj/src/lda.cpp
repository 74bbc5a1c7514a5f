#include "greenbench/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "greenbench/rng.hpp"

namespace greenbench {

void LdaHyperparams::validate() const {
  if (k < 1) throw LdaError("k must be at least 1");
  if (!(effective_alpha() > 0.0) || !std::isfinite(effective_alpha())) throw LdaError("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw LdaError("beta must be positive");
  if (sweeps < 1) throw LdaError("sweeps must be at least 1");
  if (per_doc_iterations < 1) throw LdaError("per_doc_iterations must be at least 1");
}

namespace {

// Draws an index from unnormalised cumulative weights.
std::size_t sample_cumulative(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

struct Token {
  TokenId word;
  std::uint32_t topic;
};

}  // namespace

TopicModel train(const std::vector<BowDoc>& bow, const Vocabulary& vocab, const LdaHyperparams& hyper,
                 std::string vocab_version) {
  hyper.validate();
  if (bow.empty()) throw LdaError("cannot train on an empty corpus");
  const std::size_t K = hyper.k;
  const std::size_t V = vocab.size();
  const std::size_t D = bow.size();
  if (V == 0) throw LdaError("cannot train with an empty vocabulary");
  const double alpha = hyper.effective_alpha();
  const double beta = hyper.beta;
  const double v_beta = static_cast<double>(V) * beta;

  TopicModel model;
  model.hyper = hyper;
  model.vocab_version = std::move(vocab_version);
  if (K > V) {
    model.meta.warnings.push_back("k=" + std::to_string(K) + " exceeds the number of distinct tokens (" +
                                  std::to_string(V) + ")");
  }

  // Bag-of-words expanded in ascending token id order within each document.
  std::vector<std::vector<Token>> docs(D);
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& [id, count] : bow[d].counts) {
      if (id >= V) throw LdaError("token id " + std::to_string(id) + " outside vocabulary");
      docs[d].insert(docs[d].end(), count, Token{id, 0});
    }
  }

  std::vector<std::uint32_t> n_dk(D * K, 0);
  std::vector<std::uint32_t> n_kw(K * V, 0);
  std::vector<std::uint32_t> n_k(K, 0);

  Pcg32 rng(hyper.seed);
  for (std::size_t d = 0; d < D; ++d) {
    for (Token& t : docs[d]) {
      t.topic = rng.bounded(static_cast<std::uint32_t>(K));
      ++n_dk[d * K + t.topic];
      ++n_kw[t.topic * V + t.word];
      ++n_k[t.topic];
    }
  }

  const double lgamma_beta = std::lgamma(beta);
  const double lgamma_vbeta = std::lgamma(v_beta);
  auto log_likelihood = [&] {
    double ll = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      ll += lgamma_vbeta - std::lgamma(static_cast<double>(n_k[k]) + v_beta);
      for (std::size_t w = 0; w < V; ++w) {
        const std::uint32_t c = n_kw[k * V + w];
        if (c > 0) ll += std::lgamma(static_cast<double>(c) + beta) - lgamma_beta;
      }
    }
    return ll;
  };

  std::vector<double> cumulative(K);
  for (std::size_t sweep = 0; sweep < hyper.sweeps; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      std::uint32_t* doc_counts = &n_dk[d * K];
      for (Token& t : docs[d]) {
        --doc_counts[t.topic];
        --n_kw[t.topic * V + t.word];
        --n_k[t.topic];
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (doc_counts[k] + alpha) * (n_kw[k * V + t.word] + beta) / (n_k[k] + v_beta);
          cumulative[k] = acc;
        }
        t.topic = static_cast<std::uint32_t>(sample_cumulative(cumulative, rng.uniform01()));
        ++doc_counts[t.topic];
        ++n_kw[t.topic * V + t.word];
        ++n_k[t.topic];
      }
    }
    model.meta.log_likelihood.push_back(log_likelihood());
  }
  model.meta.sweeps = hyper.sweeps;

  model.phi = Matrix(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = n_k[k] + v_beta;
    for (std::size_t w = 0; w < V; ++w) model.phi(k, w) = (n_kw[k * V + w] + beta) / denom;
  }
  model.theta = Matrix(D, K);
  const double k_alpha = static_cast<double>(K) * alpha;
  for (std::size_t d = 0; d < D; ++d) {
    const double denom = static_cast<double>(docs[d].size()) + k_alpha;
    for (std::size_t k = 0; k < K; ++k) model.theta(d, k) = (n_dk[d * K + k] + alpha) / denom;
  }
  return model;
}

Matrix fold_in(const TopicModel& model, const std::vector<BowDoc>& docs) {
  const std::size_t K = model.num_topics();
  const std::size_t V = model.vocab_size();
  const double alpha = model.hyper.effective_alpha();
  Matrix theta(docs.size(), K);
  std::vector<double> cumulative(K);
  std::vector<std::uint32_t> counts(K);
  std::vector<Token> tokens;

  for (std::size_t d = 0; d < docs.size(); ++d) {
    Pcg32 rng(model.hyper.seed, d + 1);
    tokens.clear();
    for (const auto& [id, count] : docs[d].counts) {
      if (id >= V) throw LdaError("token id " + std::to_string(id) + " outside vocabulary");
      tokens.insert(tokens.end(), count, Token{id, 0});
    }
    std::fill(counts.begin(), counts.end(), 0u);
    for (Token& t : tokens) {
      t.topic = rng.bounded(static_cast<std::uint32_t>(K));
      ++counts[t.topic];
    }
    for (std::size_t it = 0; it < model.hyper.per_doc_iterations && !tokens.empty(); ++it) {
      for (Token& t : tokens) {
        --counts[t.topic];
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (counts[k] + alpha) * model.phi(k, t.word);
          cumulative[k] = acc;
        }
        t.topic = static_cast<std::uint32_t>(sample_cumulative(cumulative, rng.uniform01()));
        ++counts[t.topic];
      }
    }
    const double denom = static_cast<double>(tokens.size()) + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k) theta(d, k) = (counts[k] + alpha) / denom;
  }
  return theta;
}

std::vector<WordProb> top_words(const TopicModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) {
    throw LdaError("topic index " + std::to_string(topic) + " out of range (K=" +
                   std::to_string(model.num_topics()) + ")");
  }
  const std::size_t V = model.vocab_size();
  if (n > V) throw LdaError("requested " + std::to_string(n) + " top words but V=" + std::to_string(V));
  std::vector<WordProb> words(V);
  for (std::size_t w = 0; w < V; ++w) words[w] = {static_cast<TokenId>(w), model.phi(topic, w)};
  std::partial_sort(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n), words.end(),
                    [](const WordProb& a, const WordProb& b) {
                      if (a.prob != b.prob) return a.prob > b.prob;
                      return a.id < b.id;
                    });
  words.resize(n);
  return words;
}

std::size_t dominant_topic(std::span<const double> theta_row) {
  if (theta_row.empty()) throw LdaError("dominant_topic of an empty row");
  std::size_t best = 0;
  for (std::size_t k = 0; k < theta_row.size(); ++k) {
    if (!std::isfinite(theta_row[k])) throw LdaError("non-finite entry in theta row");
    if (theta_row[k] > theta_row[best]) best = k;
  }
  return best;
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) throw LdaError("matrix data size does not match its shape");
  m.data() = std::move(data);
  return m;
}

}  // namespace

std::string model_to_json(const TopicModel& model) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["hyper"] = {{"k", model.hyper.k},
                {"alpha", model.hyper.effective_alpha()},
                {"beta", model.hyper.beta},
                {"sweeps", model.hyper.sweeps},
                {"per_doc_iterations", model.hyper.per_doc_iterations},
                {"seed", model.hyper.seed}};
  j["vocab_version"] = model.vocab_version;
  j["training"] = {{"sweeps", model.meta.sweeps},
                   {"log_likelihood", model.meta.log_likelihood},
                   {"warnings", model.meta.warnings}};
  j["phi"] = matrix_json(model.phi);
  j["theta"] = matrix_json(model.theta);
  return j.dump();
}

TopicModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LdaError(std::string("invalid model JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw LdaError("unsupported model format version " + j.at("format_version").dump());
    }
    TopicModel m;
    const auto& h = j.at("hyper");
    m.hyper.k = h.at("k").get<std::size_t>();
    m.hyper.alpha = h.at("alpha").get<double>();
    m.hyper.beta = h.at("beta").get<double>();
    m.hyper.sweeps = h.at("sweeps").get<std::size_t>();
    m.hyper.per_doc_iterations = h.at("per_doc_iterations").get<std::size_t>();
    m.hyper.seed = h.at("seed").get<std::uint64_t>();
    m.vocab_version = j.at("vocab_version").get<std::string>();
    const auto& t = j.at("training");
    m.meta.sweeps = t.at("sweeps").get<std::size_t>();
    m.meta.log_likelihood = t.at("log_likelihood").get<std::vector<double>>();
    m.meta.warnings = t.at("warnings").get<std::vector<std::string>>();
    m.phi = matrix_from(j.at("phi"));
    m.theta = matrix_from(j.at("theta"));
    if (m.phi.rows() != m.hyper.k || m.theta.cols() != m.hyper.k) {
      throw LdaError("model shapes disagree with k");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw LdaError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace greenbench
