// Deterministic rendering of survey, selection, benchmark and alignment
// artifacts to CSV, JSON and Markdown.
//
// Fixed decimals: shares, Jaccard and grams use 3, seconds use 2,
// probabilities 6 and coherence/perplexity 6.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenbench/align.hpp"
#include "greenbench/experiment.hpp"
#include "greenbench/report.hpp"
#include "greenbench/stats.hpp"
#include "greenbench/strategy.hpp"

namespace greenbench {

enum class Format { csv, json, markdown };

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `content` byte-for-byte, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

std::string render_kselect_csv(const WorkflowResult& result);
std::string render_topics_csv(const KEvaluation& eval, const Vocabulary& vocab);
std::string render_doc_topic_csv(const Matrix& doc_topic, const std::vector<TokenizedDoc>& docs);
std::string render_evolution_csv(const EvolutionTable& table);
std::string render_cooccurrence_csv(const CooccurrenceMatrix& matrix);
std::string render_top_docs_csv(const TopDocuments& top);
std::string render_prevalence(const std::vector<PrevalenceRow>& rows, Format format);

struct DiagnosticsRow {
  std::size_t k = 0;
  CoherenceReport coherence;
  double perplexity = 0.0;
};
std::string render_diagnostics(const std::vector<DiagnosticsRow>& rows, Format format);

/// Writes every analytical output of a workflow into `dir` following the
/// run directory layout and returns the file names written, in order.
std::vector<std::string> export_workflow(const WorkflowResult& result, const std::filesystem::path& dir);

nlohmann::json to_json(const RunMeasurement& m);
nlohmann::json to_json(const MeterConfig& c);
nlohmann::json to_json(const LdaHyperparams& h);
nlohmann::json to_json(const StrategyPlan& p);
nlohmann::json to_json(const WorkflowManifest& m);
nlohmann::json to_json(const stats::TTestResult& r);
nlohmann::json to_json(const stats::BootstrapCI& ci);
nlohmann::json to_json(const stats::SignTestResult& r);

struct MetricInference {
  std::optional<stats::TTestResult> t_test;
  std::optional<stats::BootstrapCI> ci_mean;
  std::optional<stats::BootstrapCI> ci_median;
  std::optional<stats::SignTestResult> sign;
};

/// Runs every test that the sample size allows (t and bootstrap need n >= 2).
MetricInference infer(const std::vector<double>& deltas, std::size_t bootstrap_b, std::uint64_t seed);
nlohmann::json to_json(const MetricInference& inf);

struct AlignmentReport {
  std::string label_a;
  std::string label_b;
  std::size_t k = 0;
  SimilarityMatrix matrix;
  Matching matching;
};
nlohmann::json to_json(const AlignmentReport& report);
std::string render_alignment_csv(const std::vector<AlignmentReport>& reports);

/// Two-panel markdown table (runtime, emissions) of average paired savings.
std::string render_savings_markdown(const std::vector<std::pair<std::string, SavingsSummary>>& rows);
std::string render_savings_csv(const std::vector<std::pair<std::string, SavingsSummary>>& rows);

/// Text report for a delta vector: t-test, bootstrap intervals, sign test.
std::string render_inference_text(const std::vector<double>& deltas, const MetricInference& inf);

/// Word sets per topic from an exported topics_k<K>.csv.
std::vector<WordSet> read_topics_csv(const std::filesystem::path& path, std::size_t top_n);

}  // namespace greenbench
