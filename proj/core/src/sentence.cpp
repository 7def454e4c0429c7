#include "surveyforge/sentence.hpp"

#include "surveyforge/categories.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge {

SentenceRecord SentenceRecord::from_text(std::string_view raw) {
  SentenceRecord record;
  record.text = to_lower_ascii(normalize_whitespace(raw));
  record.tokens = tokenize(record.text);
  return record;
}

std::vector<SentenceRecord> to_sentence_records(std::string_view raw_text) {
  std::vector<SentenceRecord> out;
  for (const auto& s : split_sentences(raw_text)) out.push_back(SentenceRecord::from_text(s));
  return out;
}

std::size_t word_count(const std::vector<SentenceRecord>& sentences) noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::string join_text(const std::vector<SentenceRecord>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (s.text.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::Background: return "background";
    case Category::Objective: return "objective";
    case Category::Method: return "method";
    case Category::Result: return "result";
    case Category::Other: return "other";
  }
  return "other";
}

std::string_view to_string(CoarseCategory c) noexcept {
  switch (c) {
    case CoarseCategory::Background: return "background";
    case CoarseCategory::Method: return "method";
    case CoarseCategory::Other: return "other";
  }
  return "other";
}

std::optional<Category> parse_category(std::string_view name) {
  const auto n = to_lower_ascii(name);
  if (n == "background") return Category::Background;
  if (n == "objective" || n == "objectives") return Category::Objective;
  if (n == "method" || n == "methods") return Category::Method;
  if (n == "result" || n == "results") return Category::Result;
  if (n == "other") return Category::Other;
  return std::nullopt;
}

std::optional<CoarseCategory> parse_coarse(std::string_view name) {
  const auto n = to_lower_ascii(name);
  if (n == "background") return CoarseCategory::Background;
  if (n == "method" || n == "methods") return CoarseCategory::Method;
  if (n == "other") return CoarseCategory::Other;
  return std::nullopt;
}

}  // namespace surveyforge
