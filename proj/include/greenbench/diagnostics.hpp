// Model-selection diagnostics: UMass coherence, perplexity, topic prevalence.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "greenbench/corpus.hpp"
#include "greenbench/lda.hpp"

namespace greenbench {

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  std::size_t top_n = 10;
  double epsilon = 1e-12;
};

inline constexpr std::size_t kDefaultTopN = 10;
inline constexpr double kDefaultCoherenceEpsilon = 1e-12;

/// Per topic, the sum over ranked top-word pairs i < j of
/// log((D(w_i, w_j) + eps) / D(w_i)). The sum is not normalised by the
/// number of pairs.
CoherenceReport umass_coherence(const TopicModel& model, const Vocabulary& vocab,
                                std::size_t top_n = kDefaultTopN,
                                double epsilon = kDefaultCoherenceEpsilon);

/// Where the document-topic proportions for the evaluated documents come from.
enum class ThetaSource {
  training,  // docs are the training corpus, aligned with model.theta
  fold_in,   // docs are held out; theta is re-estimated against frozen phi
};

double perplexity(const TopicModel& model, const std::vector<BowDoc>& docs,
                  ThetaSource source = ThetaSource::training);

/// Same computation with an explicit D x K theta.
double perplexity_with_theta(const TopicModel& model, const Matrix& theta, const std::vector<BowDoc>& docs);

/// Fraction of all tokens attributed to each topic, using the posterior
/// p(k | d, w) proportional to theta_dk * phi_kw.
std::vector<double> token_share(const TopicModel& model, const std::vector<BowDoc>& docs);

}  // namespace greenbench
