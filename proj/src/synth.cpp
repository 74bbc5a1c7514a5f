#include "greenbench/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "greenbench/rng.hpp"

namespace greenbench {

namespace {

// Readable prefix of the synthetic vocabulary. Every entry is its own lemma.
constexpr std::array<const char*, 120> kWordBank = {
    "energy",      "carbon",      "emission",     "training",    "model",       "inference",
    "hardware",    "accelerator", "efficiency",   "footprint",   "compute",     "datacenter",
    "gpu",         "power",       "consumption",  "measurement", "tracker",     "reporting",
    "transparency", "benchmark",  "latency",      "throughput",  "quantization", "pruning",
    "distillation", "sparsity",   "compression",  "architecture", "transformer", "network",
    "layer",       "parameter",   "memory",       "edge",        "device",      "mobile",
    "federated",   "client",      "communication", "scheduling", "workload",    "cluster",
    "cloud",       "region",      "grid",         "renewable",   "intensity",   "location",
    "policy",      "regulation",  "sustainability", "governance", "disclosure", "accountability",
    "lifecycle",   "embodied",    "manufacturing", "water",      "cooling",     "server",
    "language",    "generative",  "llm",          "prompt",      "token",       "serving",
    "batching",    "caching",     "kernel",       "compiler",    "frequency",   "voltage",
    "search",      "hyperparameter", "tuning",    "automl",      "neural",      "optimization",
    "dataset",     "curation",    "selection",    "sampling",    "label",       "annotation",
    "vision",      "image",       "speech",       "audio",       "recommendation", "ranking",
    "green",       "sustainable", "responsible",  "ethic",       "society",     "environmental",
    "economic",    "trade",       "rebound",      "demand",      "supply",      "market",
    "simulation",  "estimate",    "methodology",  "framework",   "metric",      "indicator",
    "spiking",     "neuromorphic", "analog",      "photonic",    "chip",        "circuit",
    "inventory",   "offset",      "procurement",  "auditing",    "heat",        "storage",
};

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

bool preprocess_invariant(const std::string& w) {
  static const PreprocessConfig config{};
  const auto tokens = preprocess(w, config);
  return tokens.size() == 1 && tokens.front() == w;
}

const std::unordered_set<std::string>& bank_set() {
  static const std::unordered_set<std::string> set(kWordBank.begin(), kWordBank.end());
  return set;
}

std::vector<double> dirichlet(Pcg32& rng, std::size_t n, double concentration) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = rng.gamma(concentration);
    sum += x;
  }
  if (sum <= 0.0) {
    // Underflow at tiny concentrations: all mass collapses onto one coordinate.
    std::fill(v.begin(), v.end(), 0.0);
    v[rng.bounded(static_cast<std::uint32_t>(n))] = 1.0;
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

std::size_t draw(Pcg32& rng, const std::vector<double>& cumulative) {
  const double target = rng.uniform01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    c[i] = acc;
  }
  return c;
}

}  // namespace

std::string synthetic_word(std::size_t id) {
  if (id < kWordBank.size()) return kWordBank[id];
  std::size_t code = id - kWordBank.size();
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::string w;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = code % base;
    code /= base;
    w.push_back(kConsonants[syl / kVowels.size()]);
    w.push_back(kVowels[syl % kVowels.size()]);
  }
  // Ids beyond base^3 extend with further syllables.
  while (code > 0) {
    const std::size_t syl = code % base;
    code /= base;
    w.push_back(kConsonants[syl / kVowels.size()]);
    w.push_back(kVowels[syl % kVowels.size()]);
  }
  while (bank_set().count(w) > 0 || !preprocess_invariant(w)) w.push_back('x');
  return w;
}

SyntheticCorpus generate_synthetic(const SynthConfig& config) {
  if (config.k_true < 1) throw CorpusError("k_true must be at least 1");
  if (config.vocab_size < config.k_true) throw CorpusError("vocab_size must be at least k_true");
  if (config.n_docs < 1) throw CorpusError("n_docs must be at least 1");
  if (config.doc_len < config.min_tokens) throw CorpusError("doc_len must be at least min_tokens");
  if (!(config.alpha > 0.0) || !(config.beta > 0.0)) throw CorpusError("alpha and beta must be positive");
  if (config.leakage < 0.0 || config.leakage >= 1.0) throw CorpusError("leakage must be in [0, 1)");
  if (config.first_year > config.last_year) throw CorpusError("first_year after last_year");

  const std::size_t K = config.k_true;
  const std::size_t V = config.vocab_size;
  const std::size_t D = config.n_docs;
  Pcg32 rng(config.seed);

  SyntheticCorpus out;
  out.words.reserve(V);
  for (std::size_t w = 0; w < V; ++w) out.words.push_back(synthetic_word(w));
  out.block_of.resize(V);
  for (std::size_t w = 0; w < V; ++w) out.block_of[w] = std::min(K - 1, w * K / V);

  out.planted.hyper.k = K;
  out.planted.hyper.alpha = config.alpha;
  out.planted.hyper.beta = config.beta;
  out.planted.hyper.seed = config.seed;
  out.planted.vocab_version = "synthetic";
  out.planted.phi = Matrix(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    if (config.disjoint_blocks) {
      std::vector<std::size_t> block;
      for (std::size_t w = 0; w < V; ++w) {
        if (out.block_of[w] == k) block.push_back(w);
      }
      const auto p = dirichlet(rng, block.size(), config.beta);
      for (std::size_t w = 0; w < V; ++w) out.planted.phi(k, w) = config.leakage / static_cast<double>(V);
      for (std::size_t i = 0; i < block.size(); ++i) out.planted.phi(k, block[i]) += (1.0 - config.leakage) * p[i];
    } else {
      const auto p = dirichlet(rng, V, config.beta);
      for (std::size_t w = 0; w < V; ++w) out.planted.phi(k, w) = p[w];
    }
  }
  std::vector<std::vector<double>> phi_cdf(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto row = out.planted.phi.row(k);
    phi_cdf[k] = cumulate(std::vector<double>(row.begin(), row.end()));
  }

  out.planted.theta = Matrix(D, K);
  const int years = config.last_year - config.first_year + 1;
  for (std::size_t d = 0; d < D; ++d) {
    const auto theta = K == 1 ? std::vector<double>{1.0} : dirichlet(rng, K, config.alpha);
    for (std::size_t k = 0; k < K; ++k) out.planted.theta(d, k) = theta[k];
    const auto theta_cdf = cumulate(theta);
    TokenizedDoc doc;
    doc.doc_id = d;
    doc.tokens.reserve(config.doc_len);
    for (std::size_t n = 0; n < config.doc_len; ++n) {
      const std::size_t z = K == 1 ? 0 : draw(rng, theta_cdf);
      doc.tokens.push_back(out.words[draw(rng, phi_cdf[z])]);
    }
    // Publication volume grows towards recent years.
    const double u = rng.uniform01();
    doc.year = config.first_year + std::min(years - 1, static_cast<int>(std::sqrt(u) * years));
    out.docs.push_back(std::move(doc));
  }
  return out;
}

std::vector<RawRecord> synthetic_records(const SyntheticCorpus& corpus, const SynthConfig& config) {
  std::vector<RawRecord> records;
  records.reserve(corpus.docs.size());
  Pcg32 rng(config.seed, 7);
  for (const TokenizedDoc& doc : corpus.docs) {
    const std::size_t title_len = std::min<std::size_t>(doc.tokens.size() / 4, 3 + rng.bounded(4));
    RawRecord rec;
    std::string title;
    std::string abstract;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      std::string& target = i < title_len ? title : abstract;
      if (!target.empty()) target.push_back(' ');
      target += doc.tokens[i];
    }
    if (!title.empty()) {
      title[0] = static_cast<char>(title[0] - 'a' + 'A');
      rec.title = std::move(title);
    }
    abstract[0] = static_cast<char>(abstract[0] - 'a' + 'A');
    rec.abstract = std::move(abstract) + ".";
    rec.year = doc.year;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace greenbench
