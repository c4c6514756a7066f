// Parallel kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include "anchor/classifier.hpp"
#include "anchor/reference.hpp"
#include "anchor/synth.hpp"

using namespace anchor;

namespace {

const SeedInventory& seeds() {
  static const SeedInventory inv = SeedInventory::load(ANCHOR_DATA_DIR "/seeds.tsv");
  return inv;
}

const SynthCorpus& corpus() {
  static const SynthCorpus c = [] {
    SynthOptions opt;
    opt.n_docs = 20000;
    opt.offensive_rate = 0.1;
    opt.seed_emoji_rate = 0.1;
    opt.seed = 1;
    return generate_synthetic(opt, seeds());
  }();
  return c;
}

const std::vector<char>& positive() {
  static const std::vector<char> p = [] {
    std::vector<char> out;
    for (const auto& l : corpus().labels) out.push_back(l.offensive ? 1 : 0);
    return out;
  }();
  return p;
}

const std::vector<std::string>& texts() {
  static const std::vector<std::string> t = [] {
    std::vector<std::string> out;
    for (const auto& d : corpus().docs) out.push_back(d.text);
    return out;
  }();
  return t;
}

const Classifier& classifier() {
  static const Classifier c = [] {
    std::vector<std::string> tr(texts().begin(), texts().begin() + 2000);
    std::vector<int> y;
    for (std::size_t i = 0; i < tr.size(); ++i) y.push_back(positive()[i]);
    return train_classifier(tr, y, FeatureConfig{}, TrainOptions{});
  }();
  return c;
}

void BM_CountTerms(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(count_terms(corpus().docs, positive(), NormalizationConfig{}));
}
void BM_CountTermsReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::count_terms(corpus().docs, positive(), NormalizationConfig{}));
}

void BM_FilterBySeeds(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(filter_by_seeds(corpus().docs, seeds()));
}
void BM_FilterBySeedsReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::filter_by_seeds(corpus().docs, seeds()));
}

void BM_EmojiStats(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(emoji_stats(corpus().docs, corpus().labels));
}
void BM_EmojiStatsReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::emoji_stats(corpus().docs, corpus().labels));
}

void BM_Vectorize(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(classifier().space.vectorize_batch(texts()));
}
void BM_VectorizeReference(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(reference::vectorize_batch(classifier().space, texts()));
}

void BM_Dedup(benchmark::State& s) {
  const std::span<const Document> docs(corpus().docs.data(), static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(dedup(docs, NearDupPolicy{}));
}
void BM_DedupReference(benchmark::State& s) {
  const std::span<const Document> docs(corpus().docs.data(), static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(reference::dedup(docs, NearDupPolicy{}));
}

const std::vector<std::string> kTokens = {"يا", "خنزير", "انت", "والله", "حقير", ":pig:", "اليوم", "صباح"};

void BM_Explain(benchmark::State& s) {
  const ScoreFn f = [](std::string_view t) { return classifier().score(t); };
  for (auto _ : s) benchmark::DoNotOptimize(explain(f, kTokens, ExplainOptions{}));
}
void BM_ExplainReference(benchmark::State& s) {
  const ScoreFn f = [](std::string_view t) { return classifier().score(t); };
  for (auto _ : s) benchmark::DoNotOptimize(reference::explain(f, kTokens, ExplainOptions{}));
}

}  // namespace

BENCHMARK(BM_CountTerms)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountTermsReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterBySeeds)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterBySeedsReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmojiStats)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmojiStatsReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Vectorize)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VectorizeReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dedup)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DedupReference)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Explain)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExplainReference)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  // Build the shared fixtures outside the timed loops.
  classifier();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
