#include "greenbench/diagnostics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace greenbench {

CoherenceReport umass_coherence(const TopicModel& model, const Vocabulary& vocab, std::size_t top_n,
                                double epsilon) {
  if (top_n < 2) throw std::invalid_argument("coherence needs top_n >= 2");
  if (top_n > vocab.size()) {
    throw std::invalid_argument("top_n=" + std::to_string(top_n) + " exceeds vocabulary size " +
                                std::to_string(vocab.size()));
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("coherence epsilon must be positive");
  if (model.vocab_size() != vocab.size()) throw std::invalid_argument("model and vocabulary sizes differ");

  CoherenceReport report;
  report.top_n = top_n;
  report.epsilon = epsilon;
  const std::size_t K = model.num_topics();
  report.per_topic.reserve(K);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const auto top = top_words(model, k, top_n);
    double score = 0.0;
    for (std::size_t i = 0; i < top.size(); ++i) {
      const double df_i = static_cast<double>(vocab.doc_freq(top[i].id));
      assert(df_i >= 1.0);
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        const double co = static_cast<double>(vocab.co_doc_freq(top[i].id, top[j].id));
        score += std::log((co + epsilon) / df_i);
      }
    }
    report.per_topic.push_back(score);
    total += score;
  }
  report.mean = total / static_cast<double>(K);
  return report;
}

double perplexity_with_theta(const TopicModel& model, const Matrix& theta, const std::vector<BowDoc>& docs) {
  if (docs.empty()) throw std::invalid_argument("perplexity of an empty document set");
  if (theta.rows() != docs.size() || theta.cols() != model.num_topics()) {
    throw std::invalid_argument("theta shape does not match documents and topics");
  }
  const std::size_t K = model.num_topics();
  // Neumaier summation in extended precision: a constant per-token
  // probability p comes back as exactly 1/p after rounding.
  long double sum = 0.0L;
  long double comp = 0.0L;
  std::size_t n_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& [w, count] : docs[d].counts) {
      if (w >= model.vocab_size()) throw std::invalid_argument("token id outside vocabulary");
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += theta(d, k) * model.phi(k, w);
      const long double term = static_cast<long double>(count) * std::log(static_cast<long double>(p));
      const long double t = sum + term;
      comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
      n_tokens += count;
    }
  }
  if (n_tokens == 0) throw std::invalid_argument("perplexity over zero tokens");
  return static_cast<double>(std::exp(-(sum + comp) / static_cast<long double>(n_tokens)));
}

double perplexity(const TopicModel& model, const std::vector<BowDoc>& docs, ThetaSource source) {
  if (source == ThetaSource::training) {
    if (docs.size() != model.num_docs()) {
      throw std::invalid_argument("training perplexity needs the documents the model was fitted on");
    }
    return perplexity_with_theta(model, model.theta, docs);
  }
  return perplexity_with_theta(model, fold_in(model, docs), docs);
}

std::vector<double> token_share(const TopicModel& model, const std::vector<BowDoc>& docs) {
  if (docs.empty()) throw std::invalid_argument("token share of an empty corpus");
  if (docs.size() != model.num_docs()) throw std::invalid_argument("model and corpus are not aligned");
  const std::size_t K = model.num_topics();
  std::vector<double> mass(K, 0.0);
  std::vector<double> post(K);
  std::size_t n_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& [w, count] : docs[d].counts) {
      double norm = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        post[k] = model.theta(d, k) * model.phi(k, w);
        norm += post[k];
      }
      for (std::size_t k = 0; k < K; ++k) mass[k] += static_cast<double>(count) * post[k] / norm;
      n_tokens += count;
    }
  }
  if (n_tokens == 0) throw std::invalid_argument("token share over zero tokens");
  for (double& m : mass) m /= static_cast<double>(n_tokens);
  return mass;
}

}  // namespace greenbench
