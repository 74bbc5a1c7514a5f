#include "greenbench/experiment.hpp"

#include <numeric>
#include <stdexcept>

namespace greenbench {

std::string to_string(PairOrder order) {
  return order == PairOrder::baseline_first ? "baseline_first" : "strategy_first";
}

PairOrder order_for_pair(std::size_t pair_index_1based) {
  return pair_index_1based % 2 == 1 ? PairOrder::baseline_first : PairOrder::strategy_first;
}

std::string to_string(Metric metric) {
  return metric == Metric::runtime_seconds ? "runtime_seconds" : "emissions_g";
}

WorkflowManifest manifest_of(const WorkflowResult& result) {
  WorkflowManifest m;
  m.strategy = to_string(result.plan.label);
  for (const KEvaluation& e : result.evaluated) m.evaluated.emplace_back(e.k, e.coherence.mean);
  m.selected_k = result.selected_k;
  m.stop_reason = to_string(result.stop_reason);
  m.trained_models = result.trained_models;
  m.doc_topic_matrices = result.outputs.size();
  m.corpus_fingerprint = result.corpus ? result.corpus->fingerprint() : 0;
  m.asset_version = result.asset_version;
  m.hyper = result.hyper;
  return m;
}

DeltaSeries deltas(const PairedBlock& block, Metric metric) {
  DeltaSeries s;
  s.metric = metric;
  s.values.reserve(block.pairs.size());
  for (const PairRecord& p : block.pairs) {
    if (metric == Metric::runtime_seconds) {
      s.values.push_back(p.baseline.total_seconds - p.strategy.total_seconds);
    } else {
      s.values.push_back(p.baseline.emissions_g - p.strategy.emissions_g);
    }
  }
  return s;
}

MetricSavings savings(const std::vector<double>& baseline, const std::vector<double>& strategy) {
  if (baseline.size() != strategy.size() || baseline.empty()) {
    throw std::invalid_argument("savings need equally sized, non-empty series");
  }
  const double n = static_cast<double>(baseline.size());
  MetricSavings s;
  double delta_sum = 0.0;
  for (std::size_t i = 0; i < baseline.size(); ++i) delta_sum += baseline[i] - strategy[i];
  s.absolute_mean = delta_sum / n;
  s.baseline_mean = std::accumulate(baseline.begin(), baseline.end(), 0.0) / n;
  if (s.baseline_mean == 0.0) throw std::invalid_argument("relative savings undefined for a zero baseline mean");
  s.relative_pct = 100.0 * s.absolute_mean / s.baseline_mean;
  return s;
}

SavingsSummary savings_summary(const PairedBlock& block) {
  std::vector<double> bt, st, be, se;
  for (const PairRecord& p : block.pairs) {
    bt.push_back(p.baseline.total_seconds);
    st.push_back(p.strategy.total_seconds);
    be.push_back(p.baseline.emissions_g);
    se.push_back(p.strategy.emissions_g);
  }
  return {savings(bt, st), savings(be, se)};
}

BlockRun run_block(const StrategyPlan& plan, std::size_t n, const CorpusSource& source, LdaHyperparams hyper,
                   const MeterConfig& meter_config, std::uint64_t seed, const WorkflowOptions& options,
                   const BlockHooks& hooks, std::size_t k_min, std::size_t k_max) {
  if (n < 1) throw std::invalid_argument("a block needs at least one pair");
  meter_config.validate();
  hyper.seed = seed;
  const StrategyPlan baseline_plan = naive_plan(k_min, k_max);

  BlockRun run;
  PairedBlock& block = run.block;
  block.strategy_label = to_string(plan.label);
  block.n = n;
  block.seed = seed;
  block.hyper = hyper;
  block.meter_config = meter_config;

  auto run_one = [&](const StrategyPlan& p, std::size_t pair_index, bool is_baseline) {
    Meter meter(meter_config);
    const ExportSink sink = hooks.export_for ? hooks.export_for(pair_index, is_baseline) : ExportSink{};
    return execute(p, source, hyper, meter, options, sink);
  };

  for (std::size_t i = 1; i <= n; ++i) {
    PairRecord pair;
    pair.order = order_for_pair(i);
    std::optional<WorkflowResult> base;
    std::optional<WorkflowResult> strat;
    if (pair.order == PairOrder::baseline_first) {
      base = run_one(baseline_plan, i, true);
      strat = run_one(plan, i, false);
    } else {
      strat = run_one(plan, i, false);
      base = run_one(baseline_plan, i, true);
    }
    pair.baseline = base->measurement;
    pair.strategy = strat->measurement;
    pair.baseline_manifest = manifest_of(*base);
    pair.strategy_manifest = manifest_of(*strat);
    block.pairs.push_back(std::move(pair));
    if (hooks.on_pair) hooks.on_pair(block);
    if (i == n) {
      run.final_baseline = std::move(base);
      run.final_strategy = std::move(strat);
    }
  }
  return run;
}

}  // namespace greenbench
