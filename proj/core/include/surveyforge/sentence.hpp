#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace surveyforge {

/// A normalized (lowercased, whitespace-collapsed) sentence and its tokens.
/// Invariant: tokens == tokenize(text).
struct SentenceRecord {
  std::string text;
  std::vector<std::string> tokens;

  static SentenceRecord from_text(std::string_view raw);

  std::size_t word_count() const noexcept { return tokens.size(); }
  bool operator==(const SentenceRecord&) const = default;
};

/// split_sentences + from_text for every sentence.
std::vector<SentenceRecord> to_sentence_records(std::string_view raw_text);

std::size_t word_count(const std::vector<SentenceRecord>& sentences) noexcept;

/// Sentence texts joined with single spaces.
std::string join_text(const std::vector<SentenceRecord>& sentences);

}  // namespace surveyforge
