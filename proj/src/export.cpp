#include "greenbench/export.hpp"

#include <fstream>
#include <sstream>

#include "greenbench/csv.hpp"

namespace greenbench {

using nlohmann::json;

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw ExportError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ExportError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExportError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render_kselect_csv(const WorkflowResult& result) {
  std::string out = "k,coherence,stop_reason,selected\n";
  for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
    const KEvaluation& e = result.evaluated[i];
    const bool last = i + 1 == result.evaluated.size();
    // The stop reason is attached to the last evaluated K.
    const std::string reason = last ? to_string(result.stop_reason) : "";
    out += std::to_string(e.k) + "," + csv::fixed(e.coherence.mean, 6) + "," + reason + "," +
           (e.k == result.selected_k ? "1" : "0") + "\n";
  }
  return out;
}

std::string render_topics_csv(const KEvaluation& eval, const Vocabulary& vocab) {
  std::string out = "topic,rank,token,prob\n";
  for (std::size_t t = 0; t < eval.topics.size(); ++t) {
    for (std::size_t r = 0; r < eval.topics[t].size(); ++r) {
      const WordProb& wp = eval.topics[t][r];
      out += std::to_string(t) + "," + std::to_string(r + 1) + "," + csv::escape(vocab.token(wp.id)) + "," +
             csv::fixed(wp.prob, 6) + "\n";
    }
  }
  return out;
}

std::string render_doc_topic_csv(const Matrix& doc_topic, const std::vector<TokenizedDoc>& docs) {
  std::string out = "doc_id";
  for (std::size_t k = 0; k < doc_topic.cols(); ++k) out += ",topic_" + std::to_string(k);
  out += "\n";
  for (std::size_t d = 0; d < doc_topic.rows(); ++d) {
    out += std::to_string(docs.at(d).doc_id);
    for (std::size_t k = 0; k < doc_topic.cols(); ++k) out += "," + csv::fixed(doc_topic(d, k), 6);
    out += "\n";
  }
  return out;
}

std::string render_evolution_csv(const EvolutionTable& table) {
  std::string out = "year,topic,count\n";
  for (const EvolutionRow& r : table.rows) {
    out += std::to_string(r.year) + "," + std::to_string(r.topic) + "," + std::to_string(r.count) + "\n";
  }
  return out;
}

std::string render_cooccurrence_csv(const CooccurrenceMatrix& matrix) {
  std::string out = "topic";
  for (std::size_t j = 0; j < matrix.k; ++j) out += ",topic_" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < matrix.k; ++i) {
    out += std::to_string(i);
    for (std::size_t j = 0; j < matrix.k; ++j) out += "," + std::to_string(matrix.cells[i][j]);
    out += "\n";
  }
  return out;
}

std::string render_top_docs_csv(const TopDocuments& top) {
  std::string out = "topic,rank,doc_id,prob\n";
  for (std::size_t k = 0; k < top.per_topic.size(); ++k) {
    for (std::size_t r = 0; r < top.per_topic[k].size(); ++r) {
      const RankedDoc& d = top.per_topic[k][r];
      out += std::to_string(k) + "," + std::to_string(r + 1) + "," + std::to_string(d.doc_id) + "," +
             csv::fixed(d.prob, 6) + "\n";
    }
  }
  return out;
}

std::string render_prevalence(const std::vector<PrevalenceRow>& rows, Format format) {
  switch (format) {
    case Format::csv: {
      std::string out = "topic,label,share_pct\n";
      for (const PrevalenceRow& r : rows) {
        out += std::to_string(r.topic) + "," + csv::escape(r.label) + "," + csv::fixed(100.0 * r.share, 3) + "\n";
      }
      return out;
    }
    case Format::json: {
      json j = json::array();
      for (const PrevalenceRow& r : rows) {
        j.push_back({{"topic", r.topic}, {"label", r.label}, {"share_pct", csv::fixed(100.0 * r.share, 3)}});
      }
      return j.dump(2) + "\n";
    }
    case Format::markdown: {
      std::string out = "| Topic | Top tokens | Share of tokens (%) |\n|---:|:---|---:|\n";
      for (const PrevalenceRow& r : rows) {
        out += "| " + std::to_string(r.topic) + " | " + r.label + " | " + csv::fixed(100.0 * r.share, 3) + " |\n";
      }
      return out;
    }
  }
  return {};
}

std::string render_diagnostics(const std::vector<DiagnosticsRow>& rows, Format format) {
  if (format == Format::json) {
    json j = json::array();
    for (const DiagnosticsRow& r : rows) {
      j.push_back({{"k", r.k},
                   {"coherence", {{"measure", "umass"},
                                  {"mean", r.coherence.mean},
                                  {"per_topic", r.coherence.per_topic},
                                  {"top_n", r.coherence.top_n},
                                  {"epsilon", r.coherence.epsilon}}},
                   {"perplexity", r.perplexity}});
    }
    return j.dump(2) + "\n";
  }
  if (format == Format::markdown) {
    std::string out = "| K | Coherence (UMass, mean) | Perplexity |\n|---:|---:|---:|\n";
    for (const DiagnosticsRow& r : rows) {
      out += "| " + std::to_string(r.k) + " | " + csv::fixed(r.coherence.mean, 6) + " | " +
             csv::fixed(r.perplexity, 6) + " |\n";
    }
    return out;
  }
  std::string out = "k,coherence_mean,perplexity\n";
  for (const DiagnosticsRow& r : rows) {
    out += std::to_string(r.k) + "," + csv::fixed(r.coherence.mean, 6) + "," + csv::fixed(r.perplexity, 6) + "\n";
  }
  return out;
}

std::vector<std::string> export_workflow(const WorkflowResult& result, const std::filesystem::path& dir) {
  const Corpus& corpus = *result.corpus;
  std::vector<std::string> files;
  auto put = [&](const std::string& name, const std::string& content) {
    write_text_file(dir / name, content);
    files.push_back(name);
  };

  put("kselect.csv", render_kselect_csv(result));
  for (const KEvaluation& e : result.evaluated) {
    put("topics_k" + std::to_string(e.k) + ".csv", render_topics_csv(e, corpus.vocab));
  }
  for (const auto& [k, out] : result.outputs) {
    const std::string suffix = "_k" + std::to_string(k) + ".csv";
    put("doc_topic" + suffix, render_doc_topic_csv(out.doc_topic, corpus.docs));
    put("evolution" + suffix, render_evolution_csv(out.evolution));
    put("top_docs" + suffix, render_top_docs_csv(out.top_docs));
  }
  const PostEstimation& selected = result.outputs.at(result.selected_k);
  const TopicModel& model = result.models.at(result.selected_k);
  put("evolution.csv", render_evolution_csv(selected.evolution));
  put("top_docs.csv", render_top_docs_csv(selected.top_docs));
  put("cooccurrence.csv", render_cooccurrence_csv(result.summary.cooccurrence));
  put("prevalence.csv",
      render_prevalence(prevalence_table(model, corpus.vocab, result.summary.token_shares), Format::csv));
  put("model_k" + std::to_string(result.selected_k) + ".json", model_to_json(model) + "\n");
  std::string vocab_text;
  for (const std::string& t : corpus.vocab.tokens()) vocab_text += t + "\n";
  put("vocabulary.txt", vocab_text);
  return files;
}

json to_json(const RunMeasurement& m) {
  json phases = json::array();
  for (const PhaseRecord& p : m.phases) phases.push_back({{"label", p.label}, {"seconds", p.seconds}});
  return {{"phases", phases},
          {"total_seconds", m.total_seconds},
          {"energy_kwh", m.energy_kwh},
          {"emissions_g", m.emissions_g},
          {"started_at", m.started_at}};
}

json to_json(const MeterConfig& c) {
  return {{"power_watts", c.power_watts},
          {"carbon_intensity_g_per_kwh", c.carbon_intensity},
          {"overhead_multiplier", c.overhead_multiplier},
          {"environment_note", c.environment_note}};
}

json to_json(const LdaHyperparams& h) {
  return {{"k", h.k},
          {"alpha", h.alpha > 0.0 ? json(h.alpha) : json("1/k")},
          {"beta", h.beta},
          {"sweeps", h.sweeps},
          {"per_doc_iterations", h.per_doc_iterations},
          {"seed", h.seed}};
}

json to_json(const StrategyPlan& p) {
  json stop = nullptr;
  if (p.stop_rule) {
    stop = {{"kind", "early"}, {"min_improvement", p.stop_rule->min_improvement},
            {"patience", p.stop_rule->patience}};
  } else {
    stop = {{"kind", "none"}};
  }
  return {{"label", to_string(p.label)},
          {"k_values", p.k_values},
          {"stop_rule", stop},
          {"post_scope",
           {{"kind", p.post_scope.kind == PostScope::Kind::per_k_full ? "per_k_full" : "selected_only"},
            {"top_docs", p.post_scope.top_docs}}}};
}

json to_json(const WorkflowManifest& m) {
  json evaluated = json::array();
  for (const auto& [k, c] : m.evaluated) evaluated.push_back({{"k", k}, {"coherence", c}});
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(m.corpus_fingerprint));
  return {{"strategy", m.strategy},
          {"evaluated", evaluated},
          {"selected_k", m.selected_k},
          {"stop_reason", m.stop_reason},
          {"trained_models", m.trained_models},
          {"doc_topic_matrices", m.doc_topic_matrices},
          {"corpus_fingerprint", fp},
          {"asset_version", m.asset_version},
          {"hyper", to_json(m.hyper)}};
}

json to_json(const stats::TTestResult& r) {
  return {{"mean", r.mean},
          {"sd", r.sd},
          {"n", r.n},
          {"t", r.degenerate ? json(r.t > 0 ? "inf" : "-inf") : json(r.t)},
          {"df", r.df},
          {"p_two_sided", r.p_two_sided},
          {"degenerate", r.degenerate}};
}

json to_json(const stats::BootstrapCI& ci) {
  return {{"statistic", stats::to_string(ci.statistic)},
          {"level", ci.level},
          {"b", ci.b},
          {"low", ci.low},
          {"high", ci.high},
          {"seed", ci.seed},
          {"method", "percentile, nearest rank"}};
}

json to_json(const stats::SignTestResult& r) {
  return {{"positives", r.positives},
          {"n_nonzero", r.n_nonzero},
          {"p_two_sided", r.p_two_sided},
          {"degenerate", r.degenerate}};
}

MetricInference infer(const std::vector<double>& deltas, std::size_t bootstrap_b, std::uint64_t seed) {
  MetricInference inf;
  if (!deltas.empty()) inf.sign = stats::sign_test(deltas);
  if (deltas.size() >= 2) {
    inf.t_test = stats::paired_t(deltas);
    inf.ci_mean = stats::bootstrap_ci(deltas, stats::Statistic::mean, bootstrap_b, 0.95, seed);
    inf.ci_median = stats::bootstrap_ci(deltas, stats::Statistic::median, bootstrap_b, 0.95, seed);
  }
  return inf;
}

json to_json(const MetricInference& inf) {
  json j;
  j["available"] = inf.t_test.has_value();
  if (!inf.t_test) j["reason"] = "inference needs n >= 2 paired differences";
  j["t_test"] = inf.t_test ? to_json(*inf.t_test) : json(nullptr);
  j["bootstrap_mean"] = inf.ci_mean ? to_json(*inf.ci_mean) : json(nullptr);
  j["bootstrap_median"] = inf.ci_median ? to_json(*inf.ci_median) : json(nullptr);
  j["sign_test"] = inf.sign ? to_json(*inf.sign) : json(nullptr);
  return j;
}

json to_json(const AlignmentReport& report) {
  json per_topic = json::array();
  for (std::size_t i = 0; i < report.matching.permutation.size(); ++i) {
    const std::size_t j = report.matching.permutation[i];
    per_topic.push_back({{"topic_a", i}, {"topic_b", j}, {"jaccard", csv::fixed(report.matrix.cells[i][j], 3)}});
  }
  json cells = json::array();
  for (const auto& row : report.matrix.cells) {
    json r = json::array();
    for (const double x : row) r.push_back(csv::fixed(x, 3));
    cells.push_back(r);
  }
  return {{"a", report.label_a},
          {"b", report.label_b},
          {"k", report.k},
          {"top_n", report.matrix.top_n},
          {"matrix", cells},
          {"permutation", report.matching.permutation},
          {"matched", per_topic},
          {"mean_matched_jaccard", csv::fixed(report.matching.mean_matched, 3)}};
}

std::string render_alignment_csv(const std::vector<AlignmentReport>& reports) {
  std::string out = "a,b,k,top_n,mean_matched_jaccard\n";
  for (const AlignmentReport& r : reports) {
    out += csv::escape(r.label_a) + "," + csv::escape(r.label_b) + "," + std::to_string(r.k) + "," +
           std::to_string(r.matrix.top_n) + "," + csv::fixed(r.matching.mean_matched, 3) + "\n";
  }
  return out;
}

std::string render_savings_markdown(const std::vector<std::pair<std::string, SavingsSummary>>& rows) {
  std::string out;
  out += "Panel A: Runtime\n\n| Strategy | Absolute savings (s) | Relative savings (%) |\n|:---|---:|---:|\n";
  for (const auto& [label, s] : rows) {
    out += "| " + label + " | " + csv::fixed(s.runtime.absolute_mean, 2) + " | " +
           csv::fixed(s.runtime.relative_pct, 2) + " |\n";
  }
  out += "\nPanel B: Emissions\n\n| Strategy | Absolute savings (g CO2e) | Relative savings (%) |\n|:---|---:|---:|\n";
  for (const auto& [label, s] : rows) {
    out += "| " + label + " | " + csv::fixed(s.emissions.absolute_mean, 3) + " | " +
           csv::fixed(s.emissions.relative_pct, 2) + " |\n";
  }
  out += "\nPositive values indicate lower runtime or emissions than the within-block naive baseline.\n";
  return out;
}

std::string render_savings_csv(const std::vector<std::pair<std::string, SavingsSummary>>& rows) {
  std::string out = "strategy,runtime_savings_s,runtime_savings_pct,emissions_savings_g,emissions_savings_pct\n";
  for (const auto& [label, s] : rows) {
    out += csv::escape(label) + "," + csv::fixed(s.runtime.absolute_mean, 2) + "," +
           csv::fixed(s.runtime.relative_pct, 2) + "," + csv::fixed(s.emissions.absolute_mean, 3) + "," +
           csv::fixed(s.emissions.relative_pct, 2) + "\n";
  }
  return out;
}

std::string render_inference_text(const std::vector<double>& deltas, const MetricInference& inf) {
  std::ostringstream out;
  out << "n = " << deltas.size() << "\n";
  if (inf.t_test) {
    const auto& t = *inf.t_test;
    out << "paired t-test: mean = " << csv::fixed(t.mean, 4) << ", sd = " << csv::fixed(t.sd, 4)
        << ", t = " << (t.degenerate ? std::string(t.t > 0 ? "inf" : "-inf") : csv::fixed(t.t, 4))
        << ", df = " << t.df << ", p = " << csv::fixed(t.p_two_sided, 4)
        << (t.degenerate ? " (degenerate: zero spread)" : "") << "\n";
  } else {
    out << "paired t-test: unavailable (n < 2)\n";
  }
  for (const auto* ci : {&inf.ci_mean, &inf.ci_median}) {
    if (*ci) {
      out << "bootstrap " << stats::to_string((*ci)->statistic) << " CI" << csv::fixed(100.0 * (*ci)->level, 0)
          << ": [" << csv::fixed((*ci)->low, 4) << ", " << csv::fixed((*ci)->high, 4) << "] (B = " << (*ci)->b
          << ")\n";
    }
  }
  if (inf.sign) {
    out << "sign test: " << inf.sign->positives << "/" << inf.sign->n_nonzero
        << " positive, p = " << csv::fixed(inf.sign->p_two_sided, 4)
        << (inf.sign->degenerate ? " (degenerate: all deltas zero)" : "") << "\n";
  }
  return out.str();
}

std::vector<WordSet> read_topics_csv(const std::filesystem::path& path, std::size_t top_n) {
  const auto rows = csv::parse(read_text_file(path));
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"topic", "rank", "token", "prob"}) {
    throw ExportError(path.string() + ": not a topics table");
  }
  std::vector<WordSet> sets;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != 4) throw ExportError(path.string() + ": malformed row at line " + std::to_string(rows[r].line));
    const std::size_t topic = std::stoul(f[0]);
    const std::size_t rank = std::stoul(f[1]);
    if (topic >= sets.size()) sets.resize(topic + 1);
    if (rank <= top_n) sets[topic].insert(f[2]);
  }
  return sets;
}

}  // namespace greenbench
