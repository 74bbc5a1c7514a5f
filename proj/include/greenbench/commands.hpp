// Command-line subcommands. Each returns a process exit status:
// 0 success, 1 runtime failure, 2 usage error.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "greenbench/meter.hpp"

namespace greenbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::filesystem::path csv_path;
  std::filesystem::path output_dir = "outputs";
  std::string run_id;  // empty: derived from the command and strategy
  std::string strategy = "naive";
  std::size_t pairs = 5;
  std::uint64_t seed = 42;
  std::size_t k_min = 5;
  std::size_t k_max = 15;
  double alpha = 0.0;  // 0 means 1/K
  double beta = 0.01;
  std::size_t sweeps = 10;
  std::size_t iterations = 200;
  std::size_t min_tokens = 5;
  MeterConfig meter;
  std::size_t bootstrap_b = 20000;
  std::size_t top_n_words = 10;
  double cooccur_threshold = 0.10;
};

nlohmann::json to_json(const RunConfig& config);

int cmd_ingest(const RunConfig& config, std::ostream& out);
int cmd_workflow(const RunConfig& config, std::ostream& out);
int cmd_bench(const RunConfig& config, std::ostream& out);

struct StatsOptions {
  std::filesystem::path delta_csv;
  std::string column;  // empty: first column
  std::size_t bootstrap_b = 20000;
  std::uint64_t seed = 42;
  std::optional<std::filesystem::path> json_out;
};
int cmd_stats(const StatsOptions& options, std::ostream& out);

struct AlignOptions {
  std::filesystem::path run_a;
  std::filesystem::path run_b;
  std::size_t k = 0;  // 0: the selected K of run_b
  std::size_t top_n = 10;
  std::optional<std::filesystem::path> json_out;
};
int cmd_align(const AlignOptions& options, std::ostream& out);

/// Diagnostics over the K grid plus survey artifacts at one K (default: the
/// coherence-selected K).
int cmd_report(const RunConfig& config, std::optional<std::size_t> k, std::ostream& out);

struct SynthOptions {
  std::filesystem::path out_csv;
  std::size_t k_true = 7;
  std::size_t vocab_size = 600;
  std::size_t docs = 2000;
  std::size_t doc_len = 60;
  double alpha = 0.1;
  double beta = 0.05;
  std::uint64_t seed = 42;
  bool disjoint = false;
  double leakage = 0.0;
  std::size_t placeholders = 0;  // extra rows with placeholder abstracts
  std::size_t missing_years = 0; // rows whose year is blanked
};
int cmd_synth(const SynthOptions& options, std::ostream& out);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace greenbench
