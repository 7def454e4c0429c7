#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace surveyforge {

/// A token together with its byte range in the source text. The range covers
/// the original (not lowercased) characters.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Rule-based word tokenizer.
///
/// Text is lowercased (ASCII only, so results do not depend on locale) and
/// split on whitespace. Leading and trailing punctuation of each chunk is
/// detached one character per token; internal hyphens, apostrophes, slashes
/// and periods are kept, so "state-of-the-art" and "3.5" stay whole. Commas
/// and brackets inside a chunk split it, except commas between digits.
/// A trailing period stays attached to known abbreviations and dotted forms
/// such as "fig." or "e.g.".
///
/// Two properties hold for every input and are relied on by truncation:
///   tokenize(join(tokenize(x), " ")) == tokenize(x)
///   tokenize(x.substr(0, spans[k].end)) == first k+1 tokens of x
std::vector<std::string> tokenize(std::string_view text);
std::vector<TokenSpan> tokenize_with_spans(std::string_view text);

/// Splits raw text into trimmed sentences at '.', '!' or '?' followed by
/// whitespace (closing quotes and brackets stay with the sentence).
/// Periods ending a known abbreviation ("et al.", "fig.", "e.g.") or a
/// decimal number are not boundaries. Case-insensitive, so splitting
/// lowercased text gives the lowercased sentences.
std::vector<std::string> split_sentences(std::string_view text);

std::string to_lower_ascii(std::string_view text);

/// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

/// True when the lowercased word (without its trailing period) is in the
/// abbreviation list shared by the tokenizer and the sentence splitter.
bool is_abbreviation(std::string_view word_without_period);

}  // namespace surveyforge
