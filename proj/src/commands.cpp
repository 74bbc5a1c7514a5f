#include "greenbench/commands.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <ctime>
#include <iostream>
#include <sstream>

#include "greenbench/align.hpp"
#include "greenbench/corpus.hpp"
#include "greenbench/csv.hpp"
#include "greenbench/diagnostics.hpp"
#include "greenbench/experiment.hpp"
#include "greenbench/export.hpp"
#include "greenbench/rng.hpp"
#include "greenbench/stats.hpp"
#include "greenbench/strategy.hpp"
#include "greenbench/synth.hpp"

namespace greenbench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolName = "greenbench";
constexpr int kManifestVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string compact_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

StrategyLabel strategy_of(const RunConfig& config) {
  const auto label = parse_strategy(config.strategy);
  if (!label) throw UsageError("unknown strategy '" + config.strategy + "' (naive|soft|constraints|decision)");
  return *label;
}

void check_config(const RunConfig& config) {
  if (config.csv_path.empty()) throw UsageError("--csv is required");
  if (config.k_min < 1 || config.k_min > config.k_max) throw UsageError("invalid K range");
  if (config.pairs < 1) throw UsageError("--pairs must be at least 1");
  if (config.min_tokens < 1) throw UsageError("--min-tokens must be at least 1");
  if (config.bootstrap_b < 100) throw UsageError("--bootstrap-b must be at least 100");
  if (config.top_n_words < 2) throw UsageError("--top-n-words must be at least 2");
  if (!(config.cooccur_threshold >= 0.0 && config.cooccur_threshold < 1.0)) {
    throw UsageError("--cooccur-threshold must be in [0, 1)");
  }
}

LdaHyperparams hyper_of(const RunConfig& config) {
  LdaHyperparams h;
  h.alpha = config.alpha;
  h.beta = config.beta;
  h.sweeps = config.sweeps;
  h.per_doc_iterations = config.iterations;
  h.seed = config.seed;
  h.k = config.k_min;
  h.validate();
  return h;
}

WorkflowOptions options_of(const RunConfig& config) {
  WorkflowOptions o;
  o.top_n_words = config.top_n_words;
  o.cooccur_threshold = config.cooccur_threshold;
  return o;
}

struct LoadedSource {
  CorpusSource source;
  std::size_t dropped_missing = 0;
};

LoadedSource load_source(const RunConfig& config) {
  LoadResult loaded = load_csv(config.csv_path);
  LoadedSource s;
  s.source.records = std::move(loaded.records);
  s.source.preprocess.min_tokens = config.min_tokens;
  s.dropped_missing = loaded.dropped;
  return s;
}

json corpus_json(const Corpus& corpus, std::size_t records, std::size_t dropped_missing) {
  std::size_t with_year = 0;
  for (const TokenizedDoc& d : corpus.docs) with_year += d.year ? 1 : 0;
  return {{"fingerprint", hex64(corpus.fingerprint())},
          {"records_loaded", records},
          {"dropped_missing_abstract", dropped_missing},
          {"dropped_short", corpus.dropped_short},
          {"documents", corpus.docs.size()},
          {"documents_with_year", with_year},
          {"vocabulary_size", corpus.vocab.size()},
          {"tokens", corpus.total_tokens}};
}

std::string run_id_of(const RunConfig& config, const std::string& prefix) {
  if (!config.run_id.empty()) return config.run_id;
  return prefix.empty() ? config.strategy : prefix + "_" + config.strategy;
}

// Exclusive advisory lock on <dir>/.bench.lock, released on destruction.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fs::create_directories(dir);
    path_ = dir / ".bench.lock";
    fd_ = ::open(path_.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw std::runtime_error("cannot create lock file " + path_.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fd_ = -1;
      throw std::runtime_error("another bench holds the lock on " + dir.string());
    }
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

template <typename Fn>
int guarded(std::ostream& out, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    out << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

json block_json(const PairedBlock& block, const RunConfig& config) {
  json pairs = json::array();
  for (std::size_t i = 0; i < block.pairs.size(); ++i) {
    const PairRecord& p = block.pairs[i];
    pairs.push_back({{"pair", i + 1},
                     {"order", to_string(p.order)},
                     {"baseline", {{"measurement", to_json(p.baseline)}, {"manifest", to_json(p.baseline_manifest)}}},
                     {"strategy", {{"measurement", to_json(p.strategy)}, {"manifest", to_json(p.strategy_manifest)}}}});
  }
  return {{"format_version", kManifestVersion},
          {"tool", kToolName},
          {"strategy", block.strategy_label},
          {"n", block.n},
          {"complete", block.complete()},
          {"seed", block.seed},
          {"hyper", to_json(block.hyper)},
          {"meter", to_json(block.meter_config)},
          {"environment_note", block.meter_config.environment_note},
          {"config", to_json(config)},
          {"pairs", pairs}};
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"csv_path", c.csv_path.string()},
          {"output_dir", c.output_dir.string()},
          {"run_id", c.run_id},
          {"strategy", c.strategy},
          {"pairs", c.pairs},
          {"seed", c.seed},
          {"k_min", c.k_min},
          {"k_max", c.k_max},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"sweeps", c.sweeps},
          {"iterations", c.iterations},
          {"min_tokens", c.min_tokens},
          {"power_watts", c.meter.power_watts},
          {"carbon_intensity", c.meter.carbon_intensity},
          {"overhead_multiplier", c.meter.overhead_multiplier},
          {"environment_note", c.meter.environment_note},
          {"bootstrap_b", c.bootstrap_b},
          {"top_n_words", c.top_n_words},
          {"cooccur_threshold", c.cooccur_threshold}};
}

int cmd_ingest(const RunConfig& config, std::ostream& out) {
  return guarded(out, [&] {
    if (config.csv_path.empty()) throw UsageError("--csv is required");
    const LoadedSource loaded = load_source(config);
    const Corpus corpus = build_corpus(loaded.source.records, loaded.source.preprocess);
    json j = corpus_json(corpus, loaded.source.records.size(), loaded.dropped_missing);
    j["asset_version"] = loaded.source.preprocess.asset_version();
    out << j.dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_workflow(const RunConfig& config, std::ostream& out) {
  return guarded(out, [&] {
    check_config(config);
    const StrategyLabel label = strategy_of(config);
    const StrategyPlan plan = plan_for(label, config.k_min, config.k_max);
    const LdaHyperparams hyper = hyper_of(config);
    const LoadedSource loaded = load_source(config);
    const fs::path dir = config.output_dir / run_id_of(config, "");

    const std::string started = utc_timestamp();
    Meter meter(config.meter);
    std::vector<std::string> files;
    const WorkflowResult result = execute(plan, loaded.source, hyper, meter, options_of(config),
                                          [&](const WorkflowResult& r) { files = export_workflow(r, dir); });

    json manifest;
    manifest["format_version"] = kManifestVersion;
    manifest["tool"] = kToolName;
    manifest["command"] = "workflow";
    manifest["config"] = to_json(config);
    manifest["plan"] = to_json(plan);
    manifest["asset_version"] = result.asset_version;
    manifest["corpus"] = corpus_json(*result.corpus, loaded.source.records.size(), loaded.dropped_missing);
    manifest["selection"] = to_json(manifest_of(result));
    manifest["files"] = files;
    manifest["measurement"] = to_json(result.measurement);
    manifest["meter"] = to_json(config.meter);
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_timestamp();
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "strategy " << to_string(label) << ": evaluated " << result.evaluated.size() << " K values, selected K="
        << result.selected_k << " (" << to_string(result.stop_reason) << "), "
        << csv::fixed(result.measurement.total_seconds, 2) << " s, "
        << csv::fixed(result.measurement.emissions_g, 3) << " g CO2e\n"
        << "outputs written to " << dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_bench(const RunConfig& config, std::ostream& out) {
  return guarded(out, [&] {
    check_config(config);
    const StrategyLabel label = strategy_of(config);
    const StrategyPlan plan = plan_for(label, config.k_min, config.k_max);
    const LdaHyperparams hyper = hyper_of(config);
    const LoadedSource loaded = load_source(config);
    const DirLock lock(config.output_dir);
    const fs::path dir = config.output_dir / run_id_of(config, "bench");
    const std::string block_file = to_string(label) + "_" + compact_timestamp() + "_block.json";
    const std::string started = utc_timestamp();

    std::vector<std::string> files;
    BlockHooks hooks;
    hooks.export_for = [&](std::size_t pair, bool is_baseline) -> ExportSink {
      const fs::path run_dir =
          dir / "runs" / ("pair" + std::to_string(pair) + "_" + (is_baseline ? "baseline" : "strategy"));
      return [run_dir](const WorkflowResult& r) { export_workflow(r, run_dir); };
    };
    hooks.on_pair = [&](const PairedBlock& block) {
      write_text_file(dir / block_file, block_json(block, config).dump(2) + "\n");
      out << "pair " << block.pairs.size() << "/" << block.n << " (" << to_string(block.pairs.back().order)
          << "): baseline " << csv::fixed(block.pairs.back().baseline.total_seconds, 2) << " s, strategy "
          << csv::fixed(block.pairs.back().strategy.total_seconds, 2) << " s\n";
    };

    const BlockRun run = run_block(plan, config.pairs, loaded.source, hyper, config.meter, config.seed,
                                   options_of(config), hooks, config.k_min, config.k_max);
    const PairedBlock& block = run.block;

    json j = block_json(block, config);
    json metrics;
    for (const Metric metric : {Metric::runtime_seconds, Metric::emissions_g}) {
      const DeltaSeries series = deltas(block, metric);
      metrics[to_string(metric)] = {{"deltas", series.values},
                                    {"inference", to_json(infer(series.values, config.bootstrap_b, config.seed))}};
    }
    j["deltas"] = metrics;
    const SavingsSummary summary = savings_summary(block);
    j["summary"] = {{"runtime", {{"absolute_mean_s", summary.runtime.absolute_mean},
                                 {"relative_pct", summary.runtime.relative_pct},
                                 {"baseline_mean_s", summary.runtime.baseline_mean}}},
                    {"emissions", {{"absolute_mean_g", summary.emissions.absolute_mean},
                                   {"relative_pct", summary.emissions.relative_pct},
                                   {"baseline_mean_g", summary.emissions.baseline_mean}}}};

    // Equivalence at the strategy's selected K, which the naive grid always covers.
    const WorkflowResult& base = *run.final_baseline;
    const WorkflowResult& strat = *run.final_strategy;
    const std::size_t k = strat.selected_k;
    AlignmentReport alignment;
    alignment.label_a = "naive";
    alignment.label_b = to_string(label);
    alignment.k = k;
    alignment.matrix = similarity_matrix(base.models.at(k), base.corpus->vocab, strat.models.at(k),
                                         strat.corpus->vocab, config.top_n_words);
    alignment.matching = hungarian_max(alignment.matrix);
    const std::string doc_topic_name = "doc_topic_k" + std::to_string(k) + ".csv";
    const fs::path last_base = dir / "runs" / ("pair" + std::to_string(block.n) + "_baseline") / doc_topic_name;
    const fs::path last_strat = dir / "runs" / ("pair" + std::to_string(block.n) + "_strategy") / doc_topic_name;
    const bool identical = read_text_file(last_base) == read_text_file(last_strat);
    json align_json = to_json(alignment);
    align_json["doc_topic_byte_identical"] = identical;
    j["alignment"] = align_json;

    write_text_file(dir / block_file, j.dump(2) + "\n");
    files.push_back(block_file);
    const std::vector<std::pair<std::string, SavingsSummary>> rows = {{to_string(label), summary}};
    write_text_file(dir / "savings.md", render_savings_markdown(rows));
    files.push_back("savings.md");
    write_text_file(dir / "savings.csv", render_savings_csv(rows));
    files.push_back("savings.csv");
    write_text_file(dir / "alignment.json", align_json.dump(2) + "\n");
    files.push_back("alignment.json");
    write_text_file(dir / "alignment.csv", render_alignment_csv({alignment}));
    files.push_back("alignment.csv");
    for (std::size_t i = 1; i <= block.n; ++i) {
      files.push_back("runs/pair" + std::to_string(i) + "_baseline/");
      files.push_back("runs/pair" + std::to_string(i) + "_strategy/");
    }

    json manifest;
    manifest["format_version"] = kManifestVersion;
    manifest["tool"] = kToolName;
    manifest["command"] = "bench";
    manifest["config"] = to_json(config);
    manifest["plan"] = to_json(plan);
    manifest["asset_version"] = strat.asset_version;
    manifest["corpus"] = corpus_json(*strat.corpus, loaded.source.records.size(), loaded.dropped_missing);
    manifest["files"] = files;
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_timestamp();
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "\n" << render_savings_markdown(rows);
    for (const Metric metric : {Metric::runtime_seconds, Metric::emissions_g}) {
      const DeltaSeries series = deltas(block, metric);
      out << "\n" << to_string(metric) << " deltas (naive minus " << to_string(label) << "):\n"
          << render_inference_text(series.values, infer(series.values, config.bootstrap_b, config.seed));
    }
    out << "\nmean matched Jaccard at K=" << k << ": " << csv::fixed(alignment.matching.mean_matched, 3)
        << "; doc-topic matrices byte-identical: " << (identical ? "yes" : "no") << "\n"
        << "outputs written to " << dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_stats(const StatsOptions& options, std::ostream& out) {
  return guarded(out, [&] {
    if (options.delta_csv.empty()) throw UsageError("a delta CSV path is required");
    const auto rows = csv::parse(read_text_file(options.delta_csv));
    if (rows.size() < 2) throw std::runtime_error("delta CSV needs a header and at least one value");
    std::size_t col = 0;
    if (!options.column.empty()) {
      const auto& header = rows.front().fields;
      const auto it = std::find(header.begin(), header.end(), options.column);
      if (it == header.end()) throw std::runtime_error("column '" + options.column + "' not found");
      col = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<double> values;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (col >= rows[r].fields.size()) throw std::runtime_error("line " + std::to_string(rows[r].line) + ": missing value");
      const std::string& cell = rows[r].fields[col];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size() || !std::isfinite(v)) {
        throw std::runtime_error("line " + std::to_string(rows[r].line) + ": non-numeric value '" + cell + "'");
      }
      values.push_back(v);
    }
    const MetricInference inf = infer(values, options.bootstrap_b, options.seed);
    out << render_inference_text(values, inf);
    if (options.json_out) {
      json j = to_json(inf);
      j["deltas"] = values;
      write_text_file(*options.json_out, j.dump(2) + "\n");
    }
    return kExitOk;
  });
}

int cmd_align(const AlignOptions& options, std::ostream& out) {
  return guarded(out, [&] {
    if (options.run_a.empty() || options.run_b.empty()) throw UsageError("two run directories are required");
    std::size_t k = options.k;
    if (k == 0) {
      const auto rows = csv::parse(read_text_file(options.run_b / "kselect.csv"));
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].fields.size() >= 4 && rows[r].fields[3] == "1") k = std::stoul(rows[r].fields[0]);
      }
      if (k == 0) throw std::runtime_error("no selected K recorded in " + (options.run_b / "kselect.csv").string());
    }
    const std::string name = "topics_k" + std::to_string(k) + ".csv";
    AlignmentReport report;
    report.label_a = options.run_a.string();
    report.label_b = options.run_b.string();
    report.k = k;
    report.matrix = similarity_matrix(read_topics_csv(options.run_a / name, options.top_n),
                                      read_topics_csv(options.run_b / name, options.top_n), options.top_n);
    report.matching = hungarian_max(report.matrix);
    out << render_alignment_csv({report});
    if (options.json_out) write_text_file(*options.json_out, to_json(report).dump(2) + "\n");
    return kExitOk;
  });
}

int cmd_report(const RunConfig& config, std::optional<std::size_t> k, std::ostream& out) {
  return guarded(out, [&] {
    check_config(config);
    LdaHyperparams hyper = hyper_of(config);
    const LoadedSource loaded = load_source(config);
    const Corpus corpus = build_corpus(loaded.source.records, loaded.source.preprocess);
    const std::string vocab_version = loaded.source.preprocess.asset_version();
    const fs::path dir = config.output_dir / (config.run_id.empty() ? std::string("report") : config.run_id);

    std::vector<DiagnosticsRow> diag;
    std::map<std::size_t, TopicModel> models;
    for (std::size_t kk = config.k_min; kk <= config.k_max; ++kk) {
      hyper.k = kk;
      TopicModel m = train(corpus.bow, corpus.vocab, hyper, vocab_version);
      diag.push_back({kk, umass_coherence(m, corpus.vocab, config.top_n_words), perplexity(m, corpus.bow)});
      models.emplace(kk, std::move(m));
    }
    std::size_t chosen = diag.front().k;
    double best = diag.front().coherence.mean;
    for (const DiagnosticsRow& r : diag) {
      if (r.coherence.mean > best) {
        best = r.coherence.mean;
        chosen = r.k;
      }
    }
    if (k) {
      if (*k < config.k_min || *k > config.k_max) throw UsageError("--k must lie within [k-min, k-max]");
      chosen = *k;
    }
    const TopicModel& model = models.at(chosen);
    const auto shares = token_share(model, corpus.bow);
    const auto prevalence = prevalence_table(model, corpus.vocab, shares);

    write_text_file(dir / "diagnostics.csv", render_diagnostics(diag, Format::csv));
    write_text_file(dir / "diagnostics.json", render_diagnostics(diag, Format::json));
    write_text_file(dir / "prevalence.csv", render_prevalence(prevalence, Format::csv));
    write_text_file(dir / "prevalence.md", render_prevalence(prevalence, Format::markdown));
    write_text_file(dir / "evolution.csv", render_evolution_csv(evolution_table(model.theta, corpus.docs)));
    write_text_file(dir / "cooccurrence.csv", render_cooccurrence_csv(cooccurrence(model.theta, config.cooccur_threshold)));
    write_text_file(dir / "top_docs.csv", render_top_docs_csv(top_documents(model.theta, corpus.docs, 10)));
    KEvaluation eval;
    eval.k = chosen;
    for (std::size_t t = 0; t < chosen; ++t) eval.topics.push_back(top_words(model, t, config.top_n_words));
    write_text_file(dir / ("topics_k" + std::to_string(chosen) + ".csv"), render_topics_csv(eval, corpus.vocab));
    json manifest = {{"format_version", kManifestVersion},
                     {"tool", kToolName},
                     {"command", "report"},
                     {"config", to_json(config)},
                     {"k", chosen},
                     {"asset_version", vocab_version},
                     {"corpus", corpus_json(corpus, loaded.source.records.size(), loaded.dropped_missing)},
                     {"cooccurrence_threshold", config.cooccur_threshold},
                     {"generated_at", utc_timestamp()}};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << render_diagnostics(diag, Format::markdown) << "\nK = " << chosen << "\n\n"
        << render_prevalence(prevalence, Format::markdown) << "outputs written to " << dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_synth(const SynthOptions& options, std::ostream& out) {
  return guarded(out, [&] {
    if (options.out_csv.empty()) throw UsageError("--out is required");
    SynthConfig sc;
    sc.k_true = options.k_true;
    sc.vocab_size = options.vocab_size;
    sc.n_docs = options.docs;
    sc.doc_len = options.doc_len;
    sc.alpha = options.alpha;
    sc.beta = options.beta;
    sc.seed = options.seed;
    sc.disjoint_blocks = options.disjoint;
    sc.leakage = options.leakage;
    const SyntheticCorpus corpus = generate_synthetic(sc);
    std::vector<RawRecord> records = synthetic_records(corpus, sc);

    // Deterministic sprinkling of rows the loader is expected to drop or keep
    // without a year.
    Pcg32 rng(options.seed, 11);
    for (std::size_t i = 0; i < options.missing_years && !records.empty(); ++i) {
      records[rng.bounded(static_cast<std::uint32_t>(records.size()))].year.reset();
    }
    const auto& placeholders = placeholder_abstracts();
    for (std::size_t i = 0; i < options.placeholders; ++i) {
      RawRecord r;
      r.title = "Untitled record " + std::to_string(i + 1);
      r.abstract = i % 2 == 0 ? "No abstract available" : placeholders[i % placeholders.size()];
      r.year = sc.last_year;
      const std::size_t at = rng.bounded(static_cast<std::uint32_t>(records.size() + 1));
      records.insert(records.begin() + static_cast<std::ptrdiff_t>(at), std::move(r));
    }

    std::string text = "title,abstract,year\n";
    for (const RawRecord& r : records) {
      text += csv::join({r.title.value_or(""), r.abstract, r.year ? std::to_string(*r.year) : std::string()}) + "\n";
    }
    write_text_file(options.out_csv, text);
    out << "wrote " << records.size() << " records to " << options.out_csv.string() << "\n";
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paired benchmark harness for topic-model survey workflows", kToolName};
  app.require_subcommand(1);

  RunConfig config;
  config.meter = MeterConfig::from_environment();
  std::string power_note;

  auto add_common = [&](CLI::App* sub, bool needs_csv) {
    auto* csv_opt = sub->add_option("--csv", config.csv_path, "Input CSV (title, abstract, year)");
    if (needs_csv) csv_opt->required();
    sub->add_option("--output-dir", config.output_dir, "Directory for run outputs")->capture_default_str();
    sub->add_option("--run-id", config.run_id, "Subdirectory name for this run");
    sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    sub->add_option("--k-min", config.k_min, "Smallest K in the grid")->capture_default_str();
    sub->add_option("--k-max", config.k_max, "Largest K in the grid")->capture_default_str();
    sub->add_option("--alpha", config.alpha, "Document-topic prior (0 means 1/K)")->capture_default_str();
    sub->add_option("--beta", config.beta, "Topic-word prior")->capture_default_str();
    sub->add_option("--sweeps", config.sweeps, "Full-corpus Gibbs sweeps per model")->capture_default_str();
    sub->add_option("--iterations", config.iterations, "Per-document fold-in iterations")->capture_default_str();
    sub->add_option("--min-tokens", config.min_tokens, "Minimum tokens per document")->capture_default_str();
    sub->add_option("--top-n-words", config.top_n_words, "Top words per topic")->capture_default_str();
    sub->add_option("--cooccur-threshold", config.cooccur_threshold, "Topic presence threshold (strict)")
        ->capture_default_str();
    sub->add_option("--power-watts", config.meter.power_watts, "Average power draw (W); env POWER_WATTS");
    sub->add_option("--carbon-intensity", config.meter.carbon_intensity,
                    "Grid carbon intensity (g CO2e/kWh); env CARBON_INTENSITY_G_KWH");
    sub->add_option("--overhead-multiplier", config.meter.overhead_multiplier, "Power overhead factor (>= 1)");
    sub->add_option("--environment-note", config.meter.environment_note, "Free-text execution environment note");
  };

  auto* ingest = app.add_subcommand("ingest", "Load and preprocess a corpus, print corpus statistics");
  add_common(ingest, true);

  auto* workflow = app.add_subcommand("workflow", "Run one strategy workflow and write its outputs");
  add_common(workflow, true);
  workflow->add_option("--strategy", config.strategy, "naive|soft|constraints|decision")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Run a blocked paired comparison against the naive baseline");
  add_common(bench, true);
  bench->add_option("--strategy", config.strategy, "soft|constraints|decision")->required();
  bench->add_option("--pairs", config.pairs, "Paired repetitions")->capture_default_str();
  bench->add_option("--bootstrap-b", config.bootstrap_b, "Bootstrap resamples")->capture_default_str();

  StatsOptions stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "Paired inference over a delta column");
  stats_cmd->add_option("delta_csv", stats_opts.delta_csv, "CSV with a numeric delta column")->required();
  stats_cmd->add_option("--column", stats_opts.column, "Column name (default: first column)");
  stats_cmd->add_option("--bootstrap-b", stats_opts.bootstrap_b, "Bootstrap resamples")->capture_default_str();
  stats_cmd->add_option("--seed", stats_opts.seed, "Bootstrap seed")->capture_default_str();
  std::string stats_json;
  stats_cmd->add_option("--json", stats_json, "Also write results as JSON");

  AlignOptions align_opts;
  auto* align_cmd = app.add_subcommand("align", "Match topics of two workflow runs at a common K");
  align_cmd->add_option("run_a", align_opts.run_a, "First run directory")->required();
  align_cmd->add_option("run_b", align_opts.run_b, "Second run directory")->required();
  align_cmd->add_option("--k", align_opts.k, "Common K (default: selected K of run_b)");
  align_cmd->add_option("--top-n-words", align_opts.top_n, "Top words per topic")->capture_default_str();
  std::string align_json;
  align_cmd->add_option("--json", align_json, "Also write the alignment report as JSON");

  auto* report = app.add_subcommand("report", "Diagnostics over the K grid and survey tables at one K");
  add_common(report, true);
  std::size_t report_k = 0;
  report->add_option("--k", report_k, "K for the survey tables (default: best coherence)");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus CSV from the LDA generative process");
  synth->add_option("--out", synth_opts.out_csv, "Output CSV path")->required();
  synth->add_option("--k-true", synth_opts.k_true, "Planted topics")->capture_default_str();
  synth->add_option("--vocab-size", synth_opts.vocab_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--docs", synth_opts.docs, "Documents")->capture_default_str();
  synth->add_option("--doc-len", synth_opts.doc_len, "Tokens per document")->capture_default_str();
  synth->add_option("--alpha", synth_opts.alpha, "Document-topic concentration")->capture_default_str();
  synth->add_option("--beta", synth_opts.beta, "Topic-word concentration")->capture_default_str();
  synth->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
  synth->add_flag("--disjoint", synth_opts.disjoint, "Plant topics on disjoint vocabulary blocks");
  synth->add_option("--leakage", synth_opts.leakage, "Mass spread outside a topic's block")->capture_default_str();
  synth->add_option("--placeholders", synth_opts.placeholders, "Extra rows with placeholder abstracts");
  synth->add_option("--missing-years", synth_opts.missing_years, "Rows whose year is blanked");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (*ingest) return cmd_ingest(config, out);
  if (*workflow) return cmd_workflow(config, out);
  if (*bench) return cmd_bench(config, out);
  if (*stats_cmd) {
    if (!stats_json.empty()) stats_opts.json_out = stats_json;
    return cmd_stats(stats_opts, out);
  }
  if (*align_cmd) {
    if (!align_json.empty()) align_opts.json_out = align_json;
    return cmd_align(align_opts, out);
  }
  if (*report) return cmd_report(config, report_k == 0 ? std::nullopt : std::optional<std::size_t>(report_k), out);
  if (*synth) return cmd_synth(synth_opts, out);
  return kExitUsage;
}

}  // namespace greenbench
