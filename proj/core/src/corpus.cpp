#include "surveyforge/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

#include "surveyforge/errors.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge::corpus {

const std::string& TargetSections::section(CoarseCategory c) const noexcept {
  switch (c) {
    case CoarseCategory::Background: return background;
    case CoarseCategory::Method: return method;
    case CoarseCategory::Other: return other;
  }
  return other;
}

std::string& TargetSections::section(CoarseCategory c) noexcept {
  return const_cast<std::string&>(std::as_const(*this).section(c));
}

std::string TargetSections::combined() const {
  std::string out;
  for (auto c : kAllCoarse) {
    const auto& s = section(c);
    if (s.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "validation" || name == "val") return Split::Validation;
  if (name == "test") return Split::Test;
  return std::nullopt;
}

std::size_t SurveyExample::input_word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& d : input_docs) n += d.word_count();
  return n;
}

std::size_t SurveyExample::input_sentence_count() const noexcept {
  std::size_t n = 0;
  for (const auto& d : input_docs) n += d.sentences.size();
  return n;
}

ReferenceDoc truncate_doc(ReferenceDoc doc, std::size_t max_words) {
  std::size_t remaining = max_words;
  std::size_t kept = 0;
  for (; kept < doc.sentences.size(); ++kept) {
    auto& sentence = doc.sentences[kept];
    if (sentence.tokens.size() <= remaining) {
      remaining -= sentence.tokens.size();
      continue;
    }
    if (remaining > 0) {
      const auto spans = tokenize_with_spans(sentence.text);
      sentence.text.resize(spans[remaining - 1].end);
      sentence.tokens.resize(remaining);
      ++kept;
    }
    break;
  }
  doc.sentences.resize(kept);
  if (doc.labels && doc.labels->size() > kept) doc.labels->resize(kept);
  return doc;
}

SurveyExample truncate_inputs(SurveyExample example, const InputCaps& caps) {
  if (example.input_docs.size() > caps.max_docs) example.input_docs.resize(caps.max_docs);
  for (auto& doc : example.input_docs) doc = truncate_doc(std::move(doc), caps.max_doc_words);
  return example;
}

std::string truncate_body(std::string_view text, std::int64_t limit) {
  if (limit <= 0) throw InvalidArgument("truncate_body: limit must be positive");
  const auto spans = tokenize_with_spans(text);
  if (spans.size() <= static_cast<std::size_t>(limit)) return std::string(text);
  return std::string(text.substr(0, spans[static_cast<std::size_t>(limit) - 1].end));
}

TargetSections build_target_sections(std::span<const LabeledSentence> intro_sentences) {
  TargetSections sections;
  for (const auto& s : intro_sentences) {
    if (s.sentence.text.empty()) continue;
    auto& dst = sections.section(s.coarse);
    if (!dst.empty()) dst.push_back(' ');
    dst += s.sentence.text;
  }
  return sections;
}

std::string_view to_string(DropReason r) noexcept {
  switch (r) {
    case DropReason::InputTooShort: return "input-too-short";
    case DropReason::TargetTooShort: return "target-too-short";
  }
  return "input-too-short";
}

std::string FilterDecision::reason() const {
  if (keep) return "keep";
  std::string out;
  for (auto r : reasons) {
    if (!out.empty()) out += ",";
    out += to_string(r);
  }
  return out;
}

std::size_t target_word_count(const SurveyExample& example) {
  if (example.target_mds) {
    std::size_t n = 0;
    for (auto c : kAllCoarse) n += tokenize(example.target_mds->section(c)).size();
    return n;
  }
  if (example.intro) return word_count(*example.intro);
  if (example.target_abs) return tokenize(*example.target_abs).size();
  return 0;
}

FilterDecision filter_example(const SurveyExample& example, const FilterThresholds& thresholds) {
  FilterDecision d;
  d.input_words = example.input_word_count();
  d.target_words = target_word_count(example);
  if (d.input_words < thresholds.min_input_words) d.reasons.push_back(DropReason::InputTooShort);
  if (d.target_words < thresholds.min_target_words) d.reasons.push_back(DropReason::TargetTooShort);
  d.keep = d.reasons.empty();
  return d;
}

namespace {

// Unbiased draw in [0, n); std::uniform_int_distribution is implementation
// defined, this is not.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

std::vector<Split> assign_splits(std::span<const std::string> example_ids, std::uint64_t seed) {
  const std::size_t n = example_ids.size();
  if (n < 3) throw InvalidArgument("split_dataset: need at least 3 examples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return example_ids[a] < example_ids[b]; });

  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i + 1));
    std::swap(order[i], order[j]);
  }

  const std::size_t n_train = (8 * n + 5) / 10;
  const std::size_t n_val = (n + 5) / 10;
  std::vector<Split> splits(n, Split::Test);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < n_train) {
      splits[order[k]] = Split::Train;
    } else if (k < n_train + n_val) {
      splits[order[k]] = Split::Validation;
    }
  }
  return splits;
}

std::vector<SurveyExample> split_dataset(std::vector<SurveyExample> examples, std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(examples.size());
  for (const auto& e : examples) ids.push_back(e.example_id);
  const auto splits = assign_splits(ids, seed);
  for (std::size_t i = 0; i < examples.size(); ++i) examples[i].split = splits[i];
  return examples;
}

}  // namespace surveyforge::corpus
