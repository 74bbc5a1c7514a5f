#include <doctest.h>

#include <algorithm>

#include "greenbench/experiment.hpp"
#include "greenbench/rng.hpp"
#include "greenbench/synth.hpp"

using namespace greenbench;

namespace {

PairedBlock block_from(const std::vector<double>& base_s, const std::vector<double>& strat_s,
                       const std::vector<double>& base_g = {}, const std::vector<double>& strat_g = {}) {
  PairedBlock b;
  b.n = base_s.size();
  for (std::size_t i = 0; i < base_s.size(); ++i) {
    PairRecord p;
    p.order = order_for_pair(i + 1);
    p.baseline.total_seconds = base_s[i];
    p.strategy.total_seconds = strat_s[i];
    p.baseline.emissions_g = base_g.empty() ? base_s[i] / 100.0 : base_g[i];
    p.strategy.emissions_g = strat_g.empty() ? strat_s[i] / 100.0 : strat_g[i];
    b.pairs.push_back(p);
  }
  return b;
}

CorpusSource small_source() {
  SynthConfig cfg;
  cfg.k_true = 4;
  cfg.vocab_size = 150;
  cfg.n_docs = 150;
  cfg.doc_len = 25;
  CorpusSource src;
  src.records = synthetic_records(generate_synthetic(cfg), cfg);
  return src;
}

}  // namespace

TEST_CASE("counterbalanced order alternates starting baseline first") {
  const std::vector<PairOrder> expected = {PairOrder::baseline_first, PairOrder::strategy_first,
                                           PairOrder::baseline_first, PairOrder::strategy_first,
                                           PairOrder::baseline_first};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(order_for_pair(i + 1) == expected[i]);
}

TEST_CASE("deltas") {
  const PairedBlock b = block_from({10, 12}, {7, 8}, {1.0, 2.0}, {0.5, 0.25});
  CHECK(deltas(b, Metric::runtime_seconds).values == std::vector<double>{3, 4});
  CHECK(deltas(b, Metric::emissions_g).values == std::vector<double>{0.5, 1.75});
  const PairedBlock same = block_from({5, 6, 7}, {5, 6, 7});
  CHECK(deltas(same, Metric::runtime_seconds).values == std::vector<double>{0, 0, 0});
  CHECK(deltas(same, Metric::runtime_seconds).values.size() == same.n);
}

TEST_CASE("relative savings are a ratio of means") {
  // Back-calculated baseline means for reported (absolute, relative) pairs.
  const auto runtime = savings({2252.4}, {2252.4 - 1011.07});
  CHECK(runtime.absolute_mean == doctest::Approx(1011.07));
  CHECK(std::round(runtime.relative_pct * 100.0) / 100.0 == 44.89);
  const auto grams = savings({4.002}, {4.002 - 2.532});
  CHECK(std::round(grams.relative_pct * 100.0) / 100.0 == 63.27);

  const auto zero = savings({5, 6}, {5, 6});
  CHECK(zero.absolute_mean == 0.0);
  CHECK(zero.relative_pct == 0.0);

  // Ratio of means differs from the mean of per-pair ratios.
  const auto r = savings({10, 30}, {5, 27});
  CHECK(r.relative_pct == doctest::Approx(100.0 * 4.0 / 20.0));
  CHECK_THROWS(savings({0, 0}, {0, 0}));
  CHECK_THROWS(savings({}, {}));
  CHECK_THROWS(savings({1}, {1, 2}));
}

TEST_CASE("savings summary is invariant to pair order") {
  Pcg32 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> b(5), s(5);
    for (std::size_t i = 0; i < 5; ++i) {
      b[i] = 100.0 + 50.0 * rng.uniform01();
      s[i] = 50.0 + 50.0 * rng.uniform01();
    }
    const auto base = savings_summary(block_from(b, s));
    std::vector<std::size_t> perm = {0, 1, 2, 3, 4};
    for (std::size_t i = 5; i > 1; --i) std::swap(perm[i - 1], perm[rng.bounded(static_cast<std::uint32_t>(i))]);
    std::vector<double> pb, ps;
    for (const auto i : perm) {
      pb.push_back(b[i]);
      ps.push_back(s[i]);
    }
    const auto permuted = savings_summary(block_from(pb, ps));
    CHECK(permuted.runtime.relative_pct == doctest::Approx(base.runtime.relative_pct).epsilon(1e-12));
    CHECK(permuted.emissions.absolute_mean == doctest::Approx(base.emissions.absolute_mean).epsilon(1e-12));
  }
}

TEST_CASE("a block runs 2n metered workflows with a fresh baseline each pair") {
  const CorpusSource src = small_source();
  LdaHyperparams h;
  h.sweeps = 4;
  std::vector<std::pair<std::size_t, bool>> exports;
  std::size_t callbacks = 0;
  BlockHooks hooks;
  hooks.export_for = [&](std::size_t pair, bool is_baseline) -> ExportSink {
    exports.emplace_back(pair, is_baseline);
    return {};
  };
  hooks.on_pair = [&](const PairedBlock& b) {
    ++callbacks;
    CHECK(b.pairs.size() == callbacks);
  };
  const BlockRun run = run_block(decision_plan(), 3, src, h, MeterConfig{}, 42, {}, hooks);
  const PairedBlock& b = run.block;
  CHECK(b.complete());
  CHECK(b.pairs.size() == 3);
  CHECK(callbacks == 3);
  CHECK(b.strategy_label == "decision");
  const std::vector<std::pair<std::size_t, bool>> expected = {{1, true}, {1, false}, {2, false},
                                                              {2, true}, {3, true},  {3, false}};
  CHECK(exports == expected);
  for (std::size_t i = 0; i < b.pairs.size(); ++i) {
    const PairRecord& p = b.pairs[i];
    CHECK(p.order == order_for_pair(i + 1));
    CHECK(p.baseline_manifest.strategy == "naive");
    CHECK(p.baseline_manifest.corpus_fingerprint == p.strategy_manifest.corpus_fingerprint);
    CHECK(p.baseline_manifest.hyper.seed == p.strategy_manifest.hyper.seed);
    CHECK(p.baseline_manifest.asset_version == p.strategy_manifest.asset_version);
    CHECK(p.baseline_manifest.trained_models == 11);
    CHECK(p.strategy_manifest.trained_models <= p.baseline_manifest.trained_models);
    CHECK(p.baseline.total_seconds > 0.0);
    CHECK(p.strategy.total_seconds > 0.0);
  }
  REQUIRE(run.final_baseline.has_value());
  REQUIRE(run.final_strategy.has_value());
  CHECK(run.final_baseline->models.count(run.final_strategy->selected_k) == 1);
  CHECK_THROWS(run_block(decision_plan(), 0, src, h, MeterConfig{}, 42));
}

TEST_CASE("constraints never trains more models than the baseline") {
  const CorpusSource src = small_source();
  LdaHyperparams h;
  h.sweeps = 3;
  const BlockRun run = run_block(constraints_plan(), 2, src, h, MeterConfig{}, 7);
  for (const auto& p : run.block.pairs) {
    CHECK(p.strategy_manifest.trained_models == 6);
    CHECK(p.baseline_manifest.trained_models == 11);
    CHECK(p.strategy_manifest.hyper.seed == 7);
  }
}
