#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surveyforge/categories.hpp"
#include "surveyforge/sentence.hpp"

namespace surveyforge::corpus {

/// One input document (a reference paper's abstract, or a survey body for
/// the abstract-generation subset).
struct ReferenceDoc {
  std::string doc_id;
  std::vector<SentenceRecord> sentences;
  /// Per-sentence rhetorical labels, either supplied externally or written by
  /// the classify stage. When present its size equals sentences.size().
  std::optional<std::vector<Category>> labels;

  std::size_t word_count() const noexcept { return surveyforge::word_count(sentences); }
  bool operator==(const ReferenceDoc&) const = default;
};

struct TargetSections {
  std::string background;
  std::string method;
  std::string other;

  const std::string& section(CoarseCategory c) const noexcept;
  std::string& section(CoarseCategory c) noexcept;
  /// Non-empty sections joined with a space, background -> method -> other.
  std::string combined() const;
  bool operator==(const TargetSections&) const = default;
};

enum class Split { Train, Validation, Test };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view name);

struct SurveyExample {
  std::string example_id;
  std::vector<ReferenceDoc> input_docs;
  std::optional<TargetSections> target_mds;
  std::optional<std::string> target_abs;
  /// Survey introduction sentences, the raw material for target_mds.
  std::optional<std::vector<SentenceRecord>> intro;
  std::optional<std::vector<Category>> intro_labels;
  std::optional<Split> split;

  std::size_t input_word_count() const noexcept;
  std::size_t input_sentence_count() const noexcept;
  bool operator==(const SurveyExample&) const = default;
};

struct InputCaps {
  std::size_t max_docs = 200;
  std::size_t max_doc_words = 200;
};

/// Keeps the first `max_docs` documents and cuts each to its first
/// `max_doc_words` tokens. A sentence crossing the limit is kept, cut at a
/// token boundary. Idempotent.
SurveyExample truncate_inputs(SurveyExample example, const InputCaps& caps = {});
ReferenceDoc truncate_doc(ReferenceDoc doc, std::size_t max_words);

/// First `limit` word tokens of `text`, cut in the original text so sentence
/// boundaries and formatting survive. Text already within the limit is
/// returned unchanged. Throws InvalidArgument when limit <= 0.
std::string truncate_body(std::string_view text, std::int64_t limit);

inline constexpr std::int64_t kShortBodyWords = 1024;
inline constexpr std::int64_t kLongBodyWords = 3072;

/// Concatenates, in order, the sentences of each coarse category.
TargetSections build_target_sections(std::span<const LabeledSentence> intro_sentences);

struct FilterThresholds {
  std::size_t min_input_words = 1000;
  std::size_t min_target_words = 200;
};

enum class DropReason { InputTooShort, TargetTooShort };

std::string_view to_string(DropReason r) noexcept;

struct FilterDecision {
  bool keep = true;
  std::size_t input_words = 0;
  std::size_t target_words = 0;
  /// Every violated bound, input first.
  std::vector<DropReason> reasons;

  std::string reason() const;
};

/// Target words come from target_mds when present, else the introduction,
/// else target_abs.
std::size_t target_word_count(const SurveyExample& example);

FilterDecision filter_example(const SurveyExample& example, const FilterThresholds& thresholds = {});

/// 80/10/10 assignment. The result is a pure function of the id list and the
/// seed: ids are put in a canonical order, shuffled with a seeded
/// mt19937_64 and the first round(0.8N) become train, the next round(0.1N)
/// validation and the rest test. Returned splits follow the input order.
std::vector<Split> assign_splits(std::span<const std::string> example_ids, std::uint64_t seed);

/// Throws InvalidArgument when fewer than 3 examples are given.
std::vector<SurveyExample> split_dataset(std::vector<SurveyExample> examples, std::uint64_t seed);

}  // namespace surveyforge::corpus
