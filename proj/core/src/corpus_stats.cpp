#include "surveyforge/corpus_stats.hpp"

#include "surveyforge/errors.hpp"
#include "surveyforge/fragments.hpp"
#include "surveyforge/parallel.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge::eval {
namespace {

struct TargetText {
  std::vector<std::string> tokens;
  std::size_t sentences = 0;
};

std::optional<TargetText> pick_target(const corpus::SurveyExample& ex, TargetChoice choice) {
  auto from_text = [](const std::string& text) {
    TargetText t;
    for (const auto& s : split_sentences(text)) {
      auto toks = tokenize(s);
      t.tokens.insert(t.tokens.end(), toks.begin(), toks.end());
      ++t.sentences;
    }
    return t;
  };
  const bool want_mds = choice != TargetChoice::Abs;
  if (want_mds && ex.target_mds) {
    TargetText t;
    for (auto c : kAllCoarse) {
      auto part = from_text(ex.target_mds->section(c));
      t.tokens.insert(t.tokens.end(), part.tokens.begin(), part.tokens.end());
      t.sentences += part.sentences;
    }
    return t;
  }
  if (want_mds && ex.intro) {
    TargetText t;
    for (const auto& s : *ex.intro) t.tokens.insert(t.tokens.end(), s.tokens.begin(), s.tokens.end());
    t.sentences = ex.intro->size();
    return t;
  }
  if (choice != TargetChoice::Mds && ex.target_abs) return from_text(*ex.target_abs);
  return std::nullopt;
}

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;

  void add(const std::optional<double>& v) {
    if (!v) return;
    sum += *v;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

}  // namespace

std::vector<std::string> source_tokens(const corpus::SurveyExample& example) {
  std::vector<std::string> out;
  out.reserve(example.input_word_count());
  for (const auto& d : example.input_docs) {
    for (const auto& s : d.sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  }
  return out;
}

ExampleStats example_stats(const corpus::SurveyExample& example, TargetChoice choice) {
  ExampleStats st;
  st.example_id = example.example_id;
  st.input_words = example.input_word_count();
  st.input_sentences = example.input_sentence_count();
  st.input_docs = example.input_docs.size();
  const auto target = pick_target(example, choice);
  if (!target) return st;
  st.target_words = target->tokens.size();
  st.target_sentences = target->sentences;

  const auto doc = source_tokens(example);
  if (doc.empty() || target->tokens.empty()) return st;
  const auto frags = extractive_fragments(doc, target->tokens);
  st.coverage = coverage(frags, target->tokens.size());
  st.density = density(frags, target->tokens.size());
  st.compression = compression(doc.size(), target->tokens.size());
  for (std::size_t n = 1; n <= kMaxNovelN; ++n) {
    if (target->tokens.size() >= n) st.novel_ngram_pct[n - 1] = novel_ngrams(target->tokens, doc, n);
  }
  if (choice != TargetChoice::Abs && example.target_mds) {
    for (auto c : kAllCoarse) {
      const auto toks = tokenize(example.target_mds->section(c));
      if (toks.empty()) continue;
      const auto f = extractive_fragments(doc, toks);
      st.section_coverage[index_of(c)] = coverage(f, toks.size());
      st.section_density[index_of(c)] = density(f, toks.size());
    }
  }
  return st;
}

CorpusReport corpus_stats(std::span<const corpus::SurveyExample> examples,
                          const StatsOptions& options) {
  if (examples.empty()) throw InvalidArgument("corpus_stats: empty corpus");
  CorpusReport report;
  report.examples.resize(examples.size());
  parallel_for(examples.size(), options.jobs, [&](std::size_t i) {
    report.examples[i] = example_stats(examples[i], options.target);
  });

  Accumulator in_words, in_sents, tgt_words, tgt_sents, docs, cov, dens, comp;
  std::array<Accumulator, kMaxNovelN> novel;
  for (const auto& st : report.examples) {
    in_words.add(static_cast<double>(st.input_words));
    in_sents.add(static_cast<double>(st.input_sentences));
    tgt_words.add(static_cast<double>(st.target_words));
    tgt_sents.add(static_cast<double>(st.target_sentences));
    docs.add(static_cast<double>(st.input_docs));
    cov.add(st.coverage);
    dens.add(st.density);
    comp.add(st.compression);
    for (std::size_t n = 0; n < kMaxNovelN; ++n) novel[n].add(st.novel_ngram_pct[n]);
  }
  report.pairs = examples.size();
  report.mean_input_words = in_words.mean();
  report.mean_input_sentences = in_sents.mean();
  report.mean_target_words = tgt_words.mean();
  report.mean_target_sentences = tgt_sents.mean();
  report.mean_input_docs = docs.mean();
  report.mean_coverage = cov.mean();
  report.mean_density = dens.mean();
  report.mean_compression = comp.mean();
  report.fragment_examples = cov.count;
  for (std::size_t n = 0; n < kMaxNovelN; ++n) {
    report.mean_novel_ngram_pct[n] = novel[n].mean();
    report.novel_examples[n] = novel[n].count;
  }
  return report;
}

}  // namespace surveyforge::eval
