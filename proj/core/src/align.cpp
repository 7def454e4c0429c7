#include "surveyforge/align.hpp"

#include "surveyforge/errors.hpp"

namespace surveyforge::align {
namespace {

std::vector<SentenceRecord> flatten(std::span<const std::vector<LabeledSentence>> docs) {
  std::vector<SentenceRecord> all;
  for (const auto& doc : docs) {
    for (const auto& s : doc) all.push_back(s.sentence);
  }
  return all;
}

AlignedPair make_pair(CoarseCategory c, std::vector<SentenceRecord> sources,
                      const corpus::TargetSections& target) {
  AlignedPair p;
  p.category = c;
  p.source_text = join_text(sources);
  p.source_sentences = std::move(sources);
  p.target_text = target.section(c);
  return p;
}

}  // namespace

std::string_view to_string(Mode m) noexcept {
  return m == Mode::CategoryBased ? "ca" : "one2many";
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "ca") return Mode::CategoryBased;
  if (name == "one2many" || name == "one-to-many") return Mode::OneToMany;
  return std::nullopt;
}

AlignedPairs category_align(std::span<const std::vector<LabeledSentence>> docs,
                            const corpus::TargetSections& target,
                            EmptyCategoryFallback fallback) {
  std::array<std::vector<SentenceRecord>, kCoarseCount> buckets;
  for (const auto& doc : docs) {
    for (const auto& s : doc) buckets[index_of(s.coarse)].push_back(s.sentence);
  }
  AlignedPairs pairs;
  for (auto c : kAllCoarse) {
    auto& bucket = buckets[index_of(c)];
    bool fallback_used = false;
    if (bucket.empty()) {
      fallback_used = true;
      if (fallback == EmptyCategoryFallback::FullInput) bucket = flatten(docs);
    }
    pairs[index_of(c)] = make_pair(c, std::move(bucket), target);
    pairs[index_of(c)].fallback_used = fallback_used;
  }
  return pairs;
}

AlignedPairs one_to_many_align(std::span<const std::vector<SentenceRecord>> docs,
                               const corpus::TargetSections& target) {
  std::vector<SentenceRecord> all;
  for (const auto& doc : docs) all.insert(all.end(), doc.begin(), doc.end());
  AlignedPairs pairs;
  for (auto c : kAllCoarse) pairs[index_of(c)] = make_pair(c, all, target);
  return pairs;
}

AlignedPairs one_to_many_align(std::span<const std::vector<LabeledSentence>> docs,
                               const corpus::TargetSections& target) {
  std::vector<std::vector<SentenceRecord>> plain;
  plain.reserve(docs.size());
  for (const auto& doc : docs) {
    auto& d = plain.emplace_back();
    for (const auto& s : doc) d.push_back(s.sentence);
  }
  return one_to_many_align(std::span<const std::vector<SentenceRecord>>(plain), target);
}

LabeledDocs labeled_docs(const corpus::SurveyExample& example) {
  LabeledDocs docs;
  docs.reserve(example.input_docs.size());
  for (const auto& d : example.input_docs) {
    if (!d.labels) {
      throw InvalidArgument("example " + example.example_id + ": document " + d.doc_id +
                            " has no sentence labels");
    }
    std::vector<LabeledSentence> labeled;
    labeled.reserve(d.sentences.size());
    for (std::size_t i = 0; i < d.sentences.size(); ++i) {
      labeled.push_back(LabeledSentence::make(d.sentences[i], (*d.labels)[i]));
    }
    docs.push_back(std::move(labeled));
  }
  return docs;
}

AlignedPairs align_example(const corpus::SurveyExample& example, Mode mode,
                           EmptyCategoryFallback fallback) {
  const corpus::TargetSections target = example.target_mds.value_or(corpus::TargetSections{});
  if (mode == Mode::CategoryBased) return category_align(labeled_docs(example), target, fallback);
  std::vector<std::vector<SentenceRecord>> docs;
  docs.reserve(example.input_docs.size());
  for (const auto& d : example.input_docs) docs.push_back(d.sentences);
  return one_to_many_align(std::span<const std::vector<SentenceRecord>>(docs), target);
}

std::vector<AlignedPair> training_pairs(const AlignedPairs& pairs) {
  std::vector<AlignedPair> out;
  for (const auto& p : pairs) {
    if (!p.target_text.empty()) out.push_back(p);
  }
  return out;
}

}  // namespace surveyforge::align
