// Prompting strategies as executable decision policies, and the survey
// workflow that runs under a policy.
//
// A plan fixes three margins of computation:
//   search scope      which K values are fitted, in order
//   stopping rule     whether the K search may end early
//   output scope      whether post-estimation outputs are produced for every
//                     evaluated K or only for the selected one
// For a fixed corpus and seed, the model fitted at a given K does not depend
// on the plan, so any two plans produce identical output at a common K.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "greenbench/corpus.hpp"
#include "greenbench/diagnostics.hpp"
#include "greenbench/lda.hpp"
#include "greenbench/meter.hpp"
#include "greenbench/report.hpp"

namespace greenbench {

enum class StrategyLabel { naive, green_soft, constraints, decision };

std::string to_string(StrategyLabel label);
/// Accepts the canonical names and the CLI short forms ("soft").
std::optional<StrategyLabel> parse_strategy(const std::string& name);

struct EarlyStop {
  double min_improvement = 0.005;
  std::size_t patience = 2;

  bool operator==(const EarlyStop&) const = default;
};

struct PostScope {
  enum class Kind { per_k_full, selected_only };
  Kind kind = Kind::per_k_full;
  std::size_t top_docs = 10;

  bool operator==(const PostScope&) const = default;
};

struct StrategyPlan {
  StrategyLabel label = StrategyLabel::naive;
  std::vector<std::size_t> k_values;
  std::optional<EarlyStop> stop_rule;
  PostScope post_scope;

  /// Throws std::invalid_argument. `k_min`/`k_max` bound the grid.
  void validate(std::size_t k_min = 5, std::size_t k_max = 15) const;
};

inline constexpr std::size_t kDefaultTopDocsFull = 10;

StrategyPlan naive_plan(std::size_t k_min = 5, std::size_t k_max = 15);
StrategyPlan soft_plan(std::size_t k_min = 5, std::size_t k_max = 15);
StrategyPlan constraints_plan(std::size_t k_min = 5, std::size_t k_max = 15);
StrategyPlan decision_plan(std::size_t k_min = 5, std::size_t k_max = 15);
StrategyPlan plan_for(StrategyLabel label, std::size_t k_min = 5, std::size_t k_max = 15);

enum class StopReason { exhausted, early_stopped };
std::string to_string(StopReason reason);

struct KSearchStep {
  std::size_t k = 0;
  double coherence = 0.0;
  std::size_t strikes = 0;  // consecutive small improvements after this step
};

struct KSearch {
  std::vector<KSearchStep> steps;
  std::size_t selected_k = 0;
  StopReason stop_reason = StopReason::exhausted;
};

/// Walks plan.k_values in order, calling `evaluate(k)` for the mean
/// coherence. With an early-stop rule a strike is counted whenever
/// coherence - best < min_improvement and reset by an improvement of at least
/// min_improvement; the best value moves on any strict improvement. The
/// search stops once strikes reach `patience` while K values remain.
/// selected_k is the argmax of recorded coherence, ties to the smaller K.
KSearch run_k_search(const StrategyPlan& plan, const std::function<double(std::size_t)>& evaluate);

/// Input to a workflow run: raw records plus preprocessing settings. Every
/// run repeats preprocessing inside its measured scope.
struct CorpusSource {
  std::vector<RawRecord> records;
  PreprocessConfig preprocess;
};

struct KEvaluation {
  std::size_t k = 0;
  CoherenceReport coherence;
  std::vector<std::vector<WordProb>> topics;  // top words per topic
};

struct PostEstimation {
  Matrix doc_topic;
  EvolutionTable evolution;
  TopDocuments top_docs;
};

struct SelectedSummary {
  std::vector<double> token_shares;
  CooccurrenceMatrix cooccurrence;
};

struct WorkflowOptions {
  std::size_t top_n_words = kDefaultTopN;
  double coherence_epsilon = kDefaultCoherenceEpsilon;
  double cooccur_threshold = kDefaultCooccurrenceThreshold;
};

struct WorkflowResult {
  StrategyPlan plan;
  LdaHyperparams hyper;
  std::vector<KEvaluation> evaluated;
  std::size_t selected_k = 0;
  StopReason stop_reason = StopReason::exhausted;
  std::size_t trained_models = 0;
  std::map<std::size_t, TopicModel> models;        // per output scope
  std::map<std::size_t, PostEstimation> outputs;   // per output scope
  SelectedSummary summary;
  std::shared_ptr<const Corpus> corpus;
  std::string asset_version;
  RunMeasurement measurement;

  const KEvaluation& evaluation(std::size_t k) const;
};

using ExportSink = std::function<void(const WorkflowResult&)>;

/// Runs a full survey workflow under `plan`, timing every phase with
/// `meter`. `hyper_base.k` is overridden per evaluated K. When `sink` is set
/// it runs as the final measured phase ("export").
WorkflowResult execute(const StrategyPlan& plan, const CorpusSource& source, const LdaHyperparams& hyper_base,
                       Meter& meter, const WorkflowOptions& options = {}, const ExportSink& sink = {});

}  // namespace greenbench
