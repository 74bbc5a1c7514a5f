// Blocked paired comparison of a strategy against a freshly executed naive
// baseline, with counterbalanced run order.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "greenbench/meter.hpp"
#include "greenbench/strategy.hpp"

namespace greenbench {

enum class PairOrder { baseline_first, strategy_first };
std::string to_string(PairOrder order);

/// Pair i (1-based) runs the baseline first iff i is odd.
PairOrder order_for_pair(std::size_t pair_index_1based);

/// Lightweight record of one workflow execution, kept for every run.
struct WorkflowManifest {
  std::string strategy;
  std::vector<std::pair<std::size_t, double>> evaluated;  // (K, mean coherence)
  std::size_t selected_k = 0;
  std::string stop_reason;
  std::size_t trained_models = 0;
  std::size_t doc_topic_matrices = 0;
  std::uint64_t corpus_fingerprint = 0;
  std::string asset_version;
  LdaHyperparams hyper;
};

WorkflowManifest manifest_of(const WorkflowResult& result);

struct PairRecord {
  PairOrder order = PairOrder::baseline_first;
  RunMeasurement baseline;
  RunMeasurement strategy;
  WorkflowManifest baseline_manifest;
  WorkflowManifest strategy_manifest;
};

struct PairedBlock {
  std::string strategy_label;
  std::size_t n = 5;
  std::uint64_t seed = 42;
  LdaHyperparams hyper;
  MeterConfig meter_config;
  std::vector<PairRecord> pairs;

  bool complete() const { return pairs.size() == n; }
};

enum class Metric { runtime_seconds, emissions_g };
std::string to_string(Metric metric);

struct DeltaSeries {
  Metric metric = Metric::runtime_seconds;
  std::vector<double> values;  // baseline minus strategy, in pair order
};

DeltaSeries deltas(const PairedBlock& block, Metric metric);

struct MetricSavings {
  double absolute_mean = 0.0;
  double relative_pct = 0.0;
  double baseline_mean = 0.0;
};

struct SavingsSummary {
  MetricSavings runtime;
  MetricSavings emissions;
};

/// Ratio of means: 100 * mean(baseline - strategy) / mean(baseline).
MetricSavings savings(const std::vector<double>& baseline, const std::vector<double>& strategy);
SavingsSummary savings_summary(const PairedBlock& block);

/// Hooks for a block run. `export_for` may return an export sink for a given
/// (pair index, role); `on_pair` is called after each completed pair so the
/// caller can persist partial results.
struct BlockHooks {
  std::function<ExportSink(std::size_t pair_index, bool is_baseline)> export_for;
  std::function<void(const PairedBlock&)> on_pair;
};

struct BlockRun {
  PairedBlock block;
  /// Full results of the last pair, kept for the equivalence check.
  std::optional<WorkflowResult> final_baseline;
  std::optional<WorkflowResult> final_strategy;
};

/// Executes 2n metered workflows. The baseline is always `naive_plan` over
/// the same K bounds as `plan`; it is re-run in every pair, never cached.
BlockRun run_block(const StrategyPlan& plan, std::size_t n, const CorpusSource& source, LdaHyperparams hyper,
                   const MeterConfig& meter_config, std::uint64_t seed, const WorkflowOptions& options = {},
                   const BlockHooks& hooks = {}, std::size_t k_min = 5, std::size_t k_max = 15);

}  // namespace greenbench
