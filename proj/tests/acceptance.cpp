// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "surveyforge/agreement.hpp"
#include "surveyforge/align.hpp"
#include "surveyforge/corpus.hpp"
#include "surveyforge/corpus_io.hpp"
#include "surveyforge/corpus_stats.hpp"
#include "surveyforge/fragments.hpp"
#include "surveyforge/pipeline.hpp"
#include "surveyforge/rouge.hpp"
#include "surveyforge/summarize.hpp"

using namespace surveyforge;
namespace fs = std::filesystem;
using Tokens = std::vector<std::string>;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Result {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

// Collects the first few mismatches of a criterion.
struct Check {
  std::size_t failures = 0;
  std::ostringstream first;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first << what;
  }
  Result result(const std::string& summary) const {
    if (failures == 0) return {Verdict::Pass, summary};
    return {Verdict::Fail, std::to_string(failures) + " mismatches; first: " + first.str()};
  }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Result rouge_oracle() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(101);
  Check c;
  for (int i = 0; i < 500; ++i) {
    const auto a = gen::tokens(rng, 20, 1 + static_cast<int>(rng() % 8));
    const auto b = gen::tokens(rng, 20, 1 + static_cast<int>(rng() % 8));
    for (std::size_t n : {1u, 2u}) {
      const auto got = eval::rouge_n(a, b, n);
      const auto want = oracle::rouge_n(a, b, n);
      c.expect(close(got.precision, want.p, kTol) && close(got.recall, want.r, kTol) && close(got.f1, want.f, kTol),
               "rouge-" + std::to_string(n) + " pair " + std::to_string(i));
    }
    const auto l = eval::rouge_l(a, b);
    const auto lw = oracle::rouge_l(a, b);
    c.expect(close(l.precision, lw.p, kTol) && close(l.recall, lw.r, kTol) && close(l.f1, lw.f, kTol),
             "rouge-l pair " + std::to_string(i));
  }
  return c.result("500 pairs");
}

Result fragment_oracle() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(102);
  Check c;
  for (int i = 0; i < 1000; ++i) {
    const int vocab = 1 + static_cast<int>(rng() % 6);
    const auto doc = gen::tokens(rng, 12, vocab);
    const auto sum = gen::tokens(rng, 12, vocab, 1);
    const auto got = eval::extractive_fragments(doc, sum);
    const auto want = oracle::fragments(doc, sum);
    bool same = got.size() == want.size();
    for (std::size_t k = 0; same && k < got.size(); ++k) {
      same = got[k].start_in_summary == want[k].s && got[k].start_in_doc == want[k].d && got[k].length == want[k].len;
    }
    c.expect(same, "fragments pair " + std::to_string(i));
    double cov = 0, den = 0;
    for (const auto& f : want) {
      cov += static_cast<double>(f.len);
      den += static_cast<double>(f.len) * static_cast<double>(f.len);
    }
    cov /= static_cast<double>(sum.size());
    den /= static_cast<double>(sum.size());
    c.expect(close(eval::coverage(got, sum.size()), cov, kTol) && close(eval::density(got, sum.size()), den, kTol),
             "coverage/density pair " + std::to_string(i));
  }
  return c.result("1000 pairs");
}

std::vector<SentenceRecord> random_sentences(std::mt19937_64& rng, std::size_t n, int vocab) {
  std::vector<SentenceRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen::sentence(gen::tokens(rng, 10, vocab, 1)));
  return out;
}

Result ranker_stationarity() {
  std::mt19937_64 rng(103);
  Check c;
  std::size_t small = 0;
  const summarize::PowerIterationOptions power;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = i % 3 == 0 ? 1 + rng() % 6 : 1 + rng() % 30;
    const auto s = random_sentences(rng, n, 4 + static_cast<int>(rng() % 12));
    const double threshold = i % 2 ? 0.0 : 0.1;
    for (int which = 0; which < 2; ++which) {
      const auto graph = which == 0 ? summarize::lexrank_graph(s, threshold) : summarize::textrank_graph(s);
      const auto scores = which == 0 ? summarize::lexrank(s, {threshold, power}) : summarize::textrank(s, power);
      const std::string tag = std::string(which == 0 ? "lexrank" : "textrank") + " graph " + std::to_string(i);
      const auto m = summarize::transition_matrix(graph, power.damping);
      double residual = 0, total = 0;
      for (std::size_t j = 0; j < n; ++j) {
        double sm = 0;
        for (std::size_t k = 0; k < n; ++k) sm += scores[k] * m[k * n + j];
        residual = std::max(residual, std::abs(sm - scores[j]));
        total += scores[j];
      }
      c.expect(residual < 1e-8, tag + " residual " + fmt(residual));
      c.expect(close(total, 1.0, 1e-9), tag + " sum " + fmt(total));
      if (n <= 6) {
        ++small;
        std::vector<std::vector<double>> w(n, std::vector<double>(n));
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) w[a][b] = graph.weight(a, b);
        const auto eig = oracle::stationary(oracle::damped_matrix(w, power.damping), n);
        double diff = 0;
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(eig[j] - scores[j]));
        c.expect(diff < 1e-6, tag + " eigen diff " + fmt(diff));
      }
    }
  }
  return c.result("200 graphs x 2 rankers, " + std::to_string(small) + " checked against eigen-solve");
}

Result trigram_blocking() {
  std::mt19937_64 rng(104);
  Check c;
  for (int i = 0; i < 200; ++i) {
    std::string text;
    const std::size_t n = 2 + rng() % 15;
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& t : gen::tokens(rng, 10, 5, 3)) text += t + " ";
      text += ". ";
    }
    const auto source = to_sentence_records(text);
    summarize::SummarizerOptions opts;
    opts.method = i % 2 ? summarize::Method::TextRank : summarize::Method::LexRank;
    opts.budget = {20 + rng() % 60, std::nullopt};
    opts.trigram_blocking = true;
    const auto out = summarize::summarize_section(source, opts);
    const auto picked = to_sentence_records(out);
    const std::string tag = "run " + std::to_string(i);
    std::set<Tokens> grams;
    Tokens out_tokens, src_tokens;
    for (const auto& s : source) src_tokens.insert(src_tokens.end(), s.tokens.begin(), s.tokens.end());
    for (const auto& p : picked) {
      bool verbatim = false;
      for (const auto& s : source) verbatim = verbatim || s.text == p.text;
      c.expect(verbatim, tag + " sentence not in source: " + p.text);
      for (std::size_t k = 0; k + 3 <= p.tokens.size(); ++k) {
        c.expect(grams.insert({p.tokens.begin() + k, p.tokens.begin() + k + 3}).second, tag + " repeated trigram");
      }
      out_tokens.insert(out_tokens.end(), p.tokens.begin(), p.tokens.end());
    }
    if (!out_tokens.empty()) {
      const auto f = eval::extractive_fragments(src_tokens, out_tokens);
      c.expect(eval::coverage(f, out_tokens.size()) == 1.0, tag + " coverage below 1");
    }
  }
  return c.result("200 runs");
}

Result category_partition() {
  std::mt19937_64 rng(105);
  Check c;
  for (int i = 0; i < 100; ++i) {
    align::LabeledDocs docs(1 + rng() % 8);
    std::array<std::vector<SentenceRecord>, kCoarseCount> expected;
    std::size_t total = 0;
    for (auto& d : docs) {
      const std::size_t n = rng() % 7;
      for (std::size_t k = 0; k < n; ++k) {
        const auto cat = kAllCategories[rng() % kCategoryCount];
        d.push_back(LabeledSentence::make(gen::sentence(gen::tokens(rng, 8, 20, 1)), cat));
        expected[index_of(coarsen(cat))].push_back(d.back().sentence);
        ++total;
      }
    }
    const corpus::TargetSections target{"b", "m", "o"};
    const auto pairs = align::category_align(docs, target, align::EmptyCategoryFallback::FlagEmpty);
    std::size_t got = 0;
    for (auto cat : kAllCoarse) {
      const auto& p = pairs[index_of(cat)];
      c.expect(p.source_sentences == expected[index_of(cat)], "corpus " + std::to_string(i));
      c.expect(p.fallback_used == expected[index_of(cat)].empty(), "fallback flag corpus " + std::to_string(i));
      got += p.source_sentences.size();
    }
    c.expect(got == total, "sentence count corpus " + std::to_string(i));
  }
  return c.result("100 corpora");
}

Result dataset_rules() {
  Check c;
  corpus::SurveyExample ex;
  ex.example_id = "big";
  for (int d = 0; d < 250; ++d) {
    std::string text;
    for (int w = 0; w < 250; ++w) text += "w" + std::to_string(w % 37) + (w % 25 == 24 ? ". " : " ");
    ex.input_docs.push_back({"r" + std::to_string(d), to_sentence_records(text), std::nullopt});
  }
  const auto cut = corpus::truncate_inputs(ex);
  c.expect(cut.input_docs.size() == 200, "doc count " + std::to_string(cut.input_docs.size()));
  for (std::size_t d = 0; d < cut.input_docs.size(); ++d) {
    c.expect(cut.input_docs[d].word_count() <= 200, "doc words");
    c.expect(cut.input_docs[d].doc_id == ex.input_docs[d].doc_id, "doc order");
  }

  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("e" + std::to_string(i));
  for (std::uint64_t seed : {0u, 1u, 42u}) {
    std::array<int, 3> counts{};
    for (auto s : corpus::assign_splits(ids, seed)) counts[static_cast<std::size_t>(s)]++;
    c.expect(counts == std::array<int, 3>{80, 10, 10}, "split counts seed " + std::to_string(seed));
  }

  c.expect(coarsen(Category::Objective) == CoarseCategory::Other, "objective");
  c.expect(coarsen(Category::Result) == CoarseCategory::Other, "result");
  c.expect(coarsen(Category::Other) == CoarseCategory::Other, "other");
  c.expect(coarsen(Category::Background) == CoarseCategory::Background, "background");
  c.expect(coarsen(Category::Method) == CoarseCategory::Method, "method");
  return c.result("200 docs x <=200 words, 80/10/10, coarsening");
}

// Source: distinct tokens. Summary: k spans of length L copied from
// non-adjacent source regions in reverse order, separated by m novel words.
Result planted_statistics() {
  std::mt19937_64 rng(106);
  Check c;
  std::vector<corpus::SurveyExample> examples;
  std::vector<double> cov, den, novel;
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 1 + rng() % 5, L = 1 + rng() % 6, m = rng() % 8;
    const std::size_t doc_len = k * (L + 2) + 5;
    Tokens doc;
    for (std::size_t t = 0; t < doc_len; ++t) doc.push_back("s" + std::to_string(t));
    std::vector<Tokens> pieces;
    for (std::size_t s = k; s-- > 0;) {
      const std::size_t start = 1 + s * (L + 2);
      pieces.emplace_back(doc.begin() + static_cast<std::ptrdiff_t>(start),
                          doc.begin() + static_cast<std::ptrdiff_t>(start + L));
    }
    for (std::size_t j = 0; j < m; ++j) {
      pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(rng() % (pieces.size() + 1)),
                    Tokens{"n" + std::to_string(j)});
    }
    Tokens summary;
    for (const auto& p : pieces) summary.insert(summary.end(), p.begin(), p.end());

    corpus::SurveyExample ex;
    ex.example_id = "p" + std::to_string(i);
    ex.input_docs.push_back({"d", {gen::sentence(doc)}, std::nullopt});
    ex.target_abs = gen::sentence(summary).text;
    examples.push_back(ex);

    const double n = static_cast<double>(k * L + m);
    cov.push_back(static_cast<double>(k * L) / n);
    den.push_back(static_cast<double>(k * L * L) / n);
    novel.push_back(100.0 * static_cast<double>(m) / n);
  }
  const auto report = eval::corpus_stats(examples, {eval::TargetChoice::Abs, 1});
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& st = report.examples[i];
    c.expect(st.coverage && *st.coverage == cov[i], "coverage example " + std::to_string(i));
    c.expect(st.density && *st.density == den[i], "density example " + std::to_string(i));
    c.expect(st.novel_ngram_pct[0] && *st.novel_ngram_pct[0] == novel[i], "novel example " + std::to_string(i));
  }
  c.expect(report.mean_coverage == mean(cov), "mean coverage");
  c.expect(report.mean_density == mean(den), "mean density");
  c.expect(report.mean_novel_ngram_pct[0] == mean(novel), "mean novel unigrams");
  return c.result("50 examples, coverage " + fmt(report.mean_coverage) + ", density " + fmt(report.mean_density));
}

Result kappa() {
  Check c;
  c.expect(eval::fleiss_kappa(eval::AgreementTable({{5, 0, 0}, {0, 5, 0}, {0, 0, 5}, {5, 0, 0}})) == 1.0,
           "perfect agreement");
  const double chance = eval::fleiss_kappa(eval::AgreementTable({{2, 0}, {0, 2}, {1, 1}, {1, 1}}));
  c.expect(std::abs(chance) <= 1e-9, "chance agreement " + fmt(chance));
  std::mt19937_64 rng(108);
  for (int i = 0; i < 20; ++i) {
    const int raters = 2 + static_cast<int>(rng() % 6);
    const std::size_t items = 3 + rng() % 20, cats = 2 + rng() % 4;
    std::vector<std::vector<int>> rows(items, std::vector<int>(cats, 0));
    for (auto& r : rows)
      for (int k = 0; k < raters; ++k) r[rng() % cats]++;
    const double got = eval::fleiss_kappa(eval::AgreementTable(rows));
    const double want = oracle::fleiss(rows);
    c.expect(close(got, want, 1e-12), "table " + std::to_string(i) + " " + fmt(got) + " vs " + fmt(want));
  }
  return c.result("perfect, chance and 20 random tables");
}

struct PaperRow {
  const char* subset;
  double coverage, density, compression;
  std::array<double, 4> novel;
};

Result paper_numbers() {
  const PaperRow rows[] = {{"MDS", 0.81, 1.5, 11.3, {37.39, 76.46, 93.87, 98.04}},
                           {"ABS", 0.83, 3.5, 71.6, {19.85, 53.97, 74.15, 82.22}}};
  Check c;
  std::string ran;
  for (const auto& row : rows) {
    const std::string var = std::string("SURVEYFORGE_BIGSURVEY_") + row.subset;
    const char* path = std::getenv(var.c_str());
    if (!path || !*path) continue;
    const auto examples = corpus::read_corpus(fs::path(path));
    const auto target = std::string(row.subset) == "MDS" ? eval::TargetChoice::Auto : eval::TargetChoice::Abs;
    const auto r = eval::corpus_stats(examples, {target, 1});
    auto rel = [&](const char* name, double got, double want) {
      c.expect(std::abs(got - want) <= 0.1 * want,
               std::string(row.subset) + " " + name + " " + fmt(got) + " vs " + fmt(want));
    };
    rel("coverage", r.mean_coverage, row.coverage);
    rel("density", r.mean_density, row.density);
    rel("compression", r.mean_compression, row.compression);
    for (std::size_t n = 0; n < 4; ++n) {
      c.expect(std::abs(r.mean_novel_ngram_pct[n] - row.novel[n]) <= 3.0,
               std::string(row.subset) + " novel " + std::to_string(n + 1) + "-grams " +
                   fmt(r.mean_novel_ngram_pct[n]) + " vs " + fmt(row.novel[n]));
    }
    ran += std::string(ran.empty() ? "" : ", ") + row.subset;
  }
  if (ran.empty()) {
    return {Verdict::Skip,
            "corpus not supplied (set SURVEYFORGE_BIGSURVEY_MDS / SURVEYFORGE_BIGSURVEY_ABS to a corpus jsonl)"};
  }
  return c.result("checked " + ran);
}

Result determinism() {
  const fs::path fixture = fs::path(SURVEYFORGE_TEST_DATA) / "fixture";
  const fs::path base = fs::temp_directory_path() / "surveyforge_acceptance";
  fs::remove_all(base);
  auto loaded = pipeline::load_config(fixture / "pipeline.ini");
  if (!loaded.ok()) return {Verdict::Fail, "fixture config: " + loaded.diagnostics.front().to_string()};
  Check c;
  for (const char* run : {"a", "b"}) {
    auto cfg = loaded.config;
    cfg.paths.output = base / run;
    const auto r = pipeline::run_pipeline(cfg);
    c.expect(r.exit_code == 0, std::string("run ") + run + ": " + r.diagnostic);
  }
  std::size_t compared = 0;
  if (c.failures == 0) {
    for (const auto& entry : fs::directory_iterator(base / "a")) {
      const auto name = entry.path().filename();
      if (name == "manifest.json") continue;
      ++compared;
      c.expect(fs::exists(base / "b" / name) &&
                   pipeline::read_file(entry.path()) == pipeline::read_file(base / "b" / name),
               "differs: " + name.string());
    }
    c.expect(compared == 9, "expected 9 outputs, found " + std::to_string(compared));
  }
  fs::remove_all(base);
  return c.result(std::to_string(compared) + " outputs byte-identical");
}

struct Criterion {
  int number;
  std::function<Result()> run;
  double limit_seconds;  // 0 = no limit
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, rouge_oracle, 5},         {2, fragment_oracle, 10},    {3, ranker_stationarity, 30},
      {4, trigram_blocking, 0},     {5, category_partition, 0},  {6, dataset_rules, 0},
      {7, planted_statistics, 0},   {8, kappa, 0},               {9, paper_numbers, 0},
      {10, determinism, 60},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = cr.run();
    } catch (const std::exception& e) {
      r = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.verdict != Verdict::Skip && cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
      r = {Verdict::Fail, r.detail + "; took " + fmt(secs) + " s, limit " + fmt(cr.limit_seconds) + " s"};
    }
    const char* word = r.verdict == Verdict::Pass ? "PASS" : r.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("criterion %d: %s (%s; %.3f s)\n", cr.number, word, r.detail.c_str(), secs);
    if (r.verdict == Verdict::Fail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
