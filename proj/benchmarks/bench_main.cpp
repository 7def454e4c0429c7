#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "surveyforge/fragments.hpp"
#include "surveyforge/rouge.hpp"
#include "surveyforge/summarize.hpp"
#include "surveyforge/text.hpp"

using namespace surveyforge;

namespace {

std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t n, int vocab) {
  std::uniform_int_distribution<int> w(0, vocab - 1);
  std::vector<std::string> out(n);
  for (auto& t : out) t = "w" + std::to_string(w(rng));
  return out;
}

// Roughly the size of one BigSurvey-MDS input: ~450 sentences, ~12k words.
std::vector<SentenceRecord> random_sentences(std::size_t n) {
  std::mt19937_64 rng(7);
  std::vector<SentenceRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto toks = random_tokens(rng, 10 + rng() % 30, 3000);
    std::string text;
    for (const auto& t : toks) text += t + ' ';
    out.push_back(SentenceRecord::from_text(text));
  }
  return out;
}

void BM_Fragments(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto doc = random_tokens(rng, static_cast<std::size_t>(state.range(0)), 2000);
  auto sum = random_tokens(rng, 1000, 2000);
  // Plant copied spans so the summary has long fragments.
  for (std::size_t i = 0; i + 20 < sum.size(); i += 40) {
    const auto from = static_cast<std::ptrdiff_t>((i * 7) % (doc.size() - 20));
    std::copy_n(doc.begin() + from, 20, sum.begin() + static_cast<std::ptrdiff_t>(i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::extractive_fragments(doc, sum));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fragments)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto a = random_tokens(rng, static_cast<std::size_t>(state.range(0)), 500);
  const auto b = random_tokens(rng, static_cast<std::size_t>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(eval::rouge_l(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RougeL)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_RougeN(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = random_tokens(rng, 1000, 500);
  const auto b = random_tokens(rng, 12000, 500);
  for (auto _ : state) benchmark::DoNotOptimize(eval::rouge_n(a, b, 2));
}
BENCHMARK(BM_RougeN);

void BM_LexRank(benchmark::State& state) {
  const auto s = random_sentences(static_cast<std::size_t>(state.range(0)));
  summarize::LexRankOptions opts;
  opts.threshold = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(summarize::lexrank(s, opts));
}
BENCHMARK(BM_LexRank)->Arg(100)->Arg(450)->Unit(benchmark::kMillisecond);

void BM_TextRank(benchmark::State& state) {
  const auto s = random_sentences(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(summarize::textrank(s));
}
BENCHMARK(BM_TextRank)->Arg(450)->Unit(benchmark::kMillisecond);

void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::string text;
  for (const auto& t : random_tokens(rng, 12000, 3000)) text += t + (rng() % 20 == 0 ? ". " : " ");
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

}  // namespace

BENCHMARK_MAIN();
