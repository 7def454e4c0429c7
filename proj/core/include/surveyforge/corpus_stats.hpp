#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surveyforge/corpus.hpp"

namespace surveyforge::eval {

/// Which target a statistic is computed against.
enum class TargetChoice {
  /// target_mds, else the introduction, else target_abs.
  Auto,
  Mds,
  Abs,
};

inline constexpr std::size_t kMaxNovelN = 4;

/// Statistics of one example. Metrics are empty when undefined (empty
/// target or source, or a target shorter than n for novel n-grams).
struct ExampleStats {
  std::string example_id;
  std::size_t input_words = 0;
  std::size_t input_sentences = 0;
  std::size_t input_docs = 0;
  std::size_t target_words = 0;
  std::size_t target_sentences = 0;
  std::optional<double> coverage;
  std::optional<double> density;
  std::optional<double> compression;
  std::array<std::optional<double>, kMaxNovelN> novel_ngram_pct{};
  /// Coverage and density of each MDS section against the full input.
  std::array<std::optional<double>, kCoarseCount> section_coverage{};
  std::array<std::optional<double>, kCoarseCount> section_density{};
};

/// Corpus-level means (unweighted over examples).
struct CorpusReport {
  std::size_t pairs = 0;
  double mean_input_words = 0.0;
  double mean_input_sentences = 0.0;
  double mean_target_words = 0.0;
  double mean_target_sentences = 0.0;
  double mean_input_docs = 0.0;
  double mean_coverage = 0.0;
  double mean_density = 0.0;
  double mean_compression = 0.0;
  std::array<double, kMaxNovelN> mean_novel_ngram_pct{};
  /// Examples contributing to each metric mean.
  std::size_t fragment_examples = 0;
  std::array<std::size_t, kMaxNovelN> novel_examples{};
  std::vector<ExampleStats> examples;
};

struct StatsOptions {
  TargetChoice target = TargetChoice::Auto;
  std::size_t jobs = 1;
};

/// Source tokens: all input documents concatenated in order.
std::vector<std::string> source_tokens(const corpus::SurveyExample& example);

ExampleStats example_stats(const corpus::SurveyExample& example, TargetChoice target);

/// Per-example statistics in parallel, reduced in input order, so the
/// result does not depend on `jobs`. Throws InvalidArgument on an empty
/// corpus.
CorpusReport corpus_stats(std::span<const corpus::SurveyExample> examples,
                          const StatsOptions& options = {});

}  // namespace surveyforge::eval
