#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace surveyforge::eval {

/// A maximal shared token span between a summary and its source document.
struct Fragment {
  std::size_t start_in_summary = 0;
  std::size_t start_in_doc = 0;
  std::size_t length = 0;

  bool operator==(const Fragment&) const = default;
};

/// Greedy left-to-right decomposition: at each summary position take the
/// longest match against any document position (earliest document position
/// on ties), emit it and continue after it; unmatched tokens are skipped.
///
/// Runs in O(|doc| + |summary| + total fragment length) using a suffix
/// automaton of the document.
std::vector<Fragment> extractive_fragments(std::span<const std::string> doc,
                                           std::span<const std::string> summary);

/// Sum of fragment lengths / summary length. Throws UndefinedInput when
/// summary_length is 0.
double coverage(std::span<const Fragment> fragments, std::size_t summary_length);

/// Sum of squared fragment lengths / summary length.
double density(std::span<const Fragment> fragments, std::size_t summary_length);

/// Document words per summary word. Throws UndefinedInput unless both > 0.
double compression(std::size_t doc_word_count, std::size_t summary_word_count);

/// Percentage of distinct summary n-grams missing from the document.
/// Throws UndefinedInput when the summary has fewer than n tokens.
double novel_ngrams(std::span<const std::string> summary, std::span<const std::string> doc,
                    std::size_t n);

}  // namespace surveyforge::eval
