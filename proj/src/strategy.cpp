#include "greenbench/strategy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace greenbench {

std::string to_string(StrategyLabel label) {
  switch (label) {
    case StrategyLabel::naive:
      return "naive";
    case StrategyLabel::green_soft:
      return "green_soft";
    case StrategyLabel::constraints:
      return "constraints";
    case StrategyLabel::decision:
      return "decision";
  }
  return "unknown";
}

std::optional<StrategyLabel> parse_strategy(const std::string& name) {
  if (name == "naive") return StrategyLabel::naive;
  if (name == "soft" || name == "green_soft") return StrategyLabel::green_soft;
  if (name == "constraints") return StrategyLabel::constraints;
  if (name == "decision") return StrategyLabel::decision;
  return std::nullopt;
}

std::string to_string(StopReason reason) {
  return reason == StopReason::exhausted ? "exhausted" : "early_stopped";
}

void StrategyPlan::validate(std::size_t k_min, std::size_t k_max) const {
  if (k_values.empty()) throw std::invalid_argument("plan has no K values");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < k_min || k_values[i] > k_max) {
      throw std::invalid_argument("K=" + std::to_string(k_values[i]) + " outside [" + std::to_string(k_min) +
                                  ", " + std::to_string(k_max) + "]");
    }
    if (i > 0 && k_values[i] <= k_values[i - 1]) throw std::invalid_argument("K values must be strictly increasing");
  }
  if (stop_rule) {
    if (stop_rule->patience < 1) throw std::invalid_argument("patience must be at least 1");
    if (!(stop_rule->min_improvement > 0.0)) throw std::invalid_argument("min_improvement must be positive");
  }
  if (post_scope.top_docs < 1) throw std::invalid_argument("top_docs must be at least 1");
}

namespace {

std::vector<std::size_t> grid(std::size_t k_min, std::size_t k_max, std::size_t step) {
  if (k_min < 1 || k_min > k_max) throw std::invalid_argument("invalid K grid bounds");
  std::vector<std::size_t> ks;
  for (std::size_t k = k_min; k <= k_max; k += step) ks.push_back(k);
  return ks;
}

}  // namespace

StrategyPlan naive_plan(std::size_t k_min, std::size_t k_max) {
  StrategyPlan p;
  p.label = StrategyLabel::naive;
  p.k_values = grid(k_min, k_max, 1);
  p.post_scope = {PostScope::Kind::per_k_full, kDefaultTopDocsFull};
  return p;
}

StrategyPlan soft_plan(std::size_t k_min, std::size_t k_max) {
  StrategyPlan p = naive_plan(k_min, k_max);
  p.label = StrategyLabel::green_soft;
  return p;
}

StrategyPlan constraints_plan(std::size_t k_min, std::size_t k_max) {
  StrategyPlan p;
  p.label = StrategyLabel::constraints;
  p.k_values = grid(k_min, k_max, 2);
  p.post_scope = {PostScope::Kind::per_k_full, kDefaultTopDocsFull};
  return p;
}

StrategyPlan decision_plan(std::size_t k_min, std::size_t k_max) {
  StrategyPlan p;
  p.label = StrategyLabel::decision;
  p.k_values = grid(k_min, k_max, 2);
  p.stop_rule = EarlyStop{0.005, 2};
  p.post_scope = {PostScope::Kind::selected_only, 3};
  return p;
}

StrategyPlan plan_for(StrategyLabel label, std::size_t k_min, std::size_t k_max) {
  switch (label) {
    case StrategyLabel::naive:
      return naive_plan(k_min, k_max);
    case StrategyLabel::green_soft:
      return soft_plan(k_min, k_max);
    case StrategyLabel::constraints:
      return constraints_plan(k_min, k_max);
    case StrategyLabel::decision:
      return decision_plan(k_min, k_max);
  }
  throw std::invalid_argument("unknown strategy");
}

KSearch run_k_search(const StrategyPlan& plan, const std::function<double(std::size_t)>& evaluate) {
  if (plan.k_values.empty()) throw std::invalid_argument("plan has no K values");
  KSearch search;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t strikes = 0;
  for (std::size_t i = 0; i < plan.k_values.size(); ++i) {
    const std::size_t k = plan.k_values[i];
    const double c = evaluate(k);
    if (plan.stop_rule && !search.steps.empty()) {
      if (c - best < plan.stop_rule->min_improvement) {
        ++strikes;
      } else {
        strikes = 0;
      }
    }
    if (c > best) best = c;
    search.steps.push_back({k, c, strikes});
    if (plan.stop_rule && strikes >= plan.stop_rule->patience && i + 1 < plan.k_values.size()) {
      search.stop_reason = StopReason::early_stopped;
      break;
    }
  }
  const auto best_step = std::max_element(search.steps.begin(), search.steps.end(),
                                          [](const KSearchStep& a, const KSearchStep& b) {
                                            return a.coherence < b.coherence;
                                          });
  search.selected_k = best_step->k;
  return search;
}

const KEvaluation& WorkflowResult::evaluation(std::size_t k) const {
  for (const KEvaluation& e : evaluated) {
    if (e.k == k) return e;
  }
  throw std::out_of_range("K=" + std::to_string(k) + " was not evaluated");
}

namespace {

PostEstimation post_estimate(const TopicModel& model, const Corpus& corpus, std::size_t top_docs) {
  PostEstimation out;
  out.doc_topic = model.theta;
  out.evolution = evolution_table(out.doc_topic, corpus.docs);
  out.top_docs = top_documents(out.doc_topic, corpus.docs, top_docs);
  return out;
}

}  // namespace

WorkflowResult execute(const StrategyPlan& plan, const CorpusSource& source, const LdaHyperparams& hyper_base,
                       Meter& meter, const WorkflowOptions& options, const ExportSink& sink) {
  if (plan.k_values.empty()) throw std::invalid_argument("plan has no K values");

  WorkflowResult result;
  result.plan = plan;
  result.hyper = hyper_base;
  result.asset_version = source.preprocess.asset_version();

  result.corpus = meter.measure("preprocess", [&] {
    return std::make_shared<const Corpus>(build_corpus(source.records, source.preprocess));
  });
  const Corpus& corpus = *result.corpus;
  const std::string vocab_version = result.asset_version;

  const bool full = plan.post_scope.kind == PostScope::Kind::per_k_full;
  std::map<std::size_t, TopicModel> fitted;

  const KSearch search = run_k_search(plan, [&](std::size_t k) {
    LdaHyperparams hyper = hyper_base;
    hyper.k = k;
    TopicModel model = meter.measure("fit_k" + std::to_string(k),
                                     [&] { return train(corpus.bow, corpus.vocab, hyper, vocab_version); });
    ++result.trained_models;
    KEvaluation eval = meter.measure("coherence_k" + std::to_string(k), [&] {
      KEvaluation e;
      e.k = k;
      e.coherence = umass_coherence(model, corpus.vocab, options.top_n_words, options.coherence_epsilon);
      e.topics.reserve(k);
      for (std::size_t t = 0; t < k; ++t) e.topics.push_back(top_words(model, t, options.top_n_words));
      return e;
    });
    const double mean = eval.coherence.mean;
    result.evaluated.push_back(std::move(eval));
    if (full) {
      result.outputs.emplace(k, meter.measure("post_k" + std::to_string(k), [&] {
        return post_estimate(model, corpus, plan.post_scope.top_docs);
      }));
    }
    fitted.emplace(k, std::move(model));
    return mean;
  });
  result.selected_k = search.selected_k;
  result.stop_reason = search.stop_reason;

  if (full) {
    result.models = std::move(fitted);
  } else {
    // Only the chosen model survives; non-selected K never get outputs.
    result.models.emplace(search.selected_k, std::move(fitted.at(search.selected_k)));
    fitted.clear();
    const TopicModel& chosen = result.models.at(search.selected_k);
    result.outputs.emplace(search.selected_k, meter.measure("post_k" + std::to_string(search.selected_k), [&] {
      return post_estimate(chosen, corpus, plan.post_scope.top_docs);
    }));
  }

  const TopicModel& chosen = result.models.at(result.selected_k);
  result.summary = meter.measure("summary", [&] {
    SelectedSummary s;
    s.token_shares = token_share(chosen, corpus.bow);
    s.cooccurrence = cooccurrence(result.outputs.at(result.selected_k).doc_topic, options.cooccur_threshold);
    return s;
  });

  if (sink) meter.measure("export", [&] { sink(result); });
  result.measurement = meter.finish();
  return result;
}

}  // namespace greenbench
