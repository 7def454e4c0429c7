#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "surveyforge/categories.hpp"
#include "surveyforge/corpus.hpp"

namespace surveyforge::align {

/// Training/inference unit: one summary section with the input sentences
/// assigned to it.
struct AlignedPair {
  CoarseCategory category = CoarseCategory::Other;
  std::vector<SentenceRecord> source_sentences;
  std::string source_text;
  std::string target_text;
  bool fallback_used = false;

  std::size_t source_sentence_count() const noexcept { return source_sentences.size(); }
};

using AlignedPairs = std::array<AlignedPair, kCoarseCount>;

/// What category_align does for a section whose category has no input
/// sentences.
enum class EmptyCategoryFallback {
  /// Leave the source empty and set fallback_used.
  FlagEmpty,
  /// Use the full input for that section alone (one-to-many for it).
  FullInput,
};

enum class Mode { CategoryBased, OneToMany };

std::string_view to_string(Mode m) noexcept;
std::optional<Mode> parse_mode(std::string_view name);

/// One labeled sentence list per input document, in document order.
using LabeledDocs = std::vector<std::vector<LabeledSentence>>;

/// Pairs each section with the input sentences of the same coarse category,
/// merged across documents in (document, sentence) order.
AlignedPairs category_align(std::span<const std::vector<LabeledSentence>> docs,
                            const corpus::TargetSections& target,
                            EmptyCategoryFallback fallback = EmptyCategoryFallback::FlagEmpty);

/// Pairs every section with the full concatenated input.
AlignedPairs one_to_many_align(std::span<const std::vector<SentenceRecord>> docs,
                               const corpus::TargetSections& target);
AlignedPairs one_to_many_align(std::span<const std::vector<LabeledSentence>> docs,
                               const corpus::TargetSections& target);

/// Labeled input documents of an example. Throws InvalidArgument naming the
/// example and document when a document carries no labels.
LabeledDocs labeled_docs(const corpus::SurveyExample& example);

/// Convenience dispatch used by the summarize stage and the CLI.
AlignedPairs align_example(const corpus::SurveyExample& example, Mode mode,
                           EmptyCategoryFallback fallback = EmptyCategoryFallback::FlagEmpty);

/// Pairs eligible for training export: those with a non-empty target.
std::vector<AlignedPair> training_pairs(const AlignedPairs& pairs);

}  // namespace surveyforge::align
