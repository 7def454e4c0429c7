#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "surveyforge/classify.hpp"
#include "surveyforge/corpus_io.hpp"
#include "surveyforge/errors.hpp"
#include "surveyforge/text.hpp"

using namespace surveyforge;
using namespace surveyforge::corpus;
namespace fs = std::filesystem;

namespace {

std::string words(std::size_t n, const std::string& stem = "w") {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += (i % 17 == 0) ? ". " : " ";
    out += stem + std::to_string(i);
  }
  return out + ".";
}

ReferenceDoc doc_of(const std::string& id, std::size_t n_words) {
  ReferenceDoc d;
  d.doc_id = id;
  d.sentences = to_sentence_records(words(n_words));
  // words() adds punctuation tokens; trim to the exact count requested.
  return truncate_doc(std::move(d), n_words);
}

SurveyExample example_with_docs(std::size_t n_docs, std::size_t words_per_doc) {
  SurveyExample ex;
  ex.example_id = "ex";
  for (std::size_t i = 0; i < n_docs; ++i) ex.input_docs.push_back(doc_of("d" + std::to_string(i), words_per_doc));
  ex.target_abs = "a target";
  return ex;
}

}  // namespace

TEST_CASE("truncate_inputs caps documents and words") {
  SUBCASE("250 docs keep the first 200") {
    const auto ex = example_with_docs(250, 10);
    const auto t = truncate_inputs(ex);
    REQUIRE(t.input_docs.size() == 200);
    CHECK(t.input_docs.front().doc_id == "d0");
    CHECK(t.input_docs.back().doc_id == "d199");
  }
  SUBCASE("150 short docs unchanged") {
    const auto ex = example_with_docs(150, 120);
    CHECK(truncate_inputs(ex) == ex);
  }
  SUBCASE("one 250-word doc keeps its first 200 tokens") {
    ReferenceDoc d;
    d.doc_id = "x";
    d.sentences = to_sentence_records(words(300));
    std::vector<std::string> all;
    for (const auto& s : d.sentences) all.insert(all.end(), s.tokens.begin(), s.tokens.end());
    const auto cut = truncate_doc(d, 200);
    std::vector<std::string> kept;
    for (const auto& s : cut.sentences) kept.insert(kept.end(), s.tokens.begin(), s.tokens.end());
    CHECK(kept == std::vector<std::string>(all.begin(), all.begin() + 200));
    for (const auto& s : cut.sentences) CHECK(tokenize(s.text) == s.tokens);
  }
}

TEST_CASE("truncate_inputs keeps labels aligned") {
  ReferenceDoc d;
  d.doc_id = "x";
  d.sentences = to_sentence_records("one two three. four five six. seven eight nine.");
  d.labels = std::vector<Category>{Category::Background, Category::Method, Category::Result};
  const auto cut = truncate_doc(d, 5);
  REQUIRE(cut.sentences.size() == 2);
  REQUIRE(cut.labels);
  CHECK(cut.labels->size() == 2);
  CHECK(cut.sentences[1].text == "four");
}

TEST_CASE("truncation is idempotent") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto ex = example_with_docs(rng() % 260, 1 + rng() % 300);
    const auto once = truncate_inputs(ex);
    CHECK(truncate_inputs(once) == once);
    const auto body = words(1 + rng() % 4000);
    const auto limit = static_cast<std::int64_t>(1 + rng() % 3500);
    const auto b1 = truncate_body(body, limit);
    CHECK(truncate_body(b1, limit) == b1);
  }
}

TEST_CASE("truncate_body") {
  const auto count = [](const std::string& s) { return tokenize(s).size(); };
  std::string body;
  for (int i = 0; i < 5000; ++i) body += (i ? " w" : "w") + std::to_string(i);
  CHECK(count(truncate_body(body, 1024)) == 1024);
  CHECK(count(truncate_body(body.substr(0, body.find(" w3500")), 3072)) == 3072);
  std::string short_body;
  for (int i = 0; i < 800; ++i) short_body += (i ? " w" : "w") + std::to_string(i);
  CHECK(truncate_body(short_body, 1024) == short_body);
  CHECK_THROWS_AS(truncate_body(body, 0), InvalidArgument);
  CHECK_THROWS_AS(truncate_body(body, -5), InvalidArgument);
  const auto kept = truncate_body("First one. Second one here.", 4);
  CHECK(kept == "First one. Second");
}

TEST_CASE("build_target_sections") {
  const auto s = [](const char* t) { return SentenceRecord::from_text(t); };
  std::vector<LabeledSentence> in = {LabeledSentence::make(s("s1"), Category::Background),
                                     LabeledSentence::make(s("s2"), Category::Method),
                                     LabeledSentence::make(s("s3"), Category::Background)};
  auto t = build_target_sections(in);
  CHECK(t.background == "s1 s3");
  CHECK(t.method == "s2");
  CHECK(t.other == "");
  CHECK(t.combined() == "s1 s3 s2");

  std::vector<LabeledSentence> in2 = {LabeledSentence::make(s("s1"), Category::Objective),
                                      LabeledSentence::make(s("s2"), Category::Result)};
  CHECK(build_target_sections(in2).other == "s1 s2");
  CHECK(build_target_sections({}) == TargetSections{});
}

TEST_CASE("build_target_sections partitions its input") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LabeledSentence> in;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      in.push_back(LabeledSentence::make(SentenceRecord::from_text("s" + std::to_string(i) + "."),
                                         kAllCategories[rng() % kCategoryCount]));
    }
    const auto t = build_target_sections(in);
    std::size_t total = 0;
    for (auto c : kAllCoarse) total += split_sentences(t.section(c)).size();
    CHECK(total == in.size());
  }
}

TEST_CASE("coarsen") {
  CHECK(coarsen(Category::Objective) == CoarseCategory::Other);
  CHECK(coarsen(Category::Background) == CoarseCategory::Background);
  CHECK(coarsen(Category::Result) == CoarseCategory::Other);
  CHECK(coarsen(Category::Method) == CoarseCategory::Method);
  CHECK(coarsen(Category::Other) == CoarseCategory::Other);
  CHECK(parse_category("RESULTS") == Category::Result);
  CHECK(parse_category("objective") == Category::Objective);
  CHECK_FALSE(parse_category("conclusion"));
}

TEST_CASE("filter_example") {
  SurveyExample ex;
  ex.example_id = "e";
  ex.input_docs.push_back(doc_of("d", 12000));
  ex.target_abs = words(1100);
  REQUIRE(tokenize(*ex.target_abs).size() >= 1050);
  CHECK(filter_example(ex).keep);

  SurveyExample empty;
  empty.example_id = "z";
  empty.target_abs = words(300);
  const auto d0 = filter_example(empty);
  CHECK_FALSE(d0.keep);
  CHECK(d0.reason() == "input-too-short");

  SurveyExample short_target = ex;
  short_target.target_abs = "fifty words or so";
  const auto d1 = filter_example(short_target, {1000, 200});
  CHECK_FALSE(d1.keep);
  CHECK(d1.reasons == std::vector<DropReason>{DropReason::TargetTooShort});
}

namespace {

std::array<std::size_t, 3> split_counts(const std::vector<Split>& s) {
  std::array<std::size_t, 3> c{};
  for (auto x : s) c[static_cast<std::size_t>(x)]++;
  return c;
}

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("id" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("assign_splits proportions and determinism") {
  CHECK(split_counts(assign_splits(ids(100), 1)) == std::array<std::size_t, 3>{80, 10, 10});
  CHECK(split_counts(assign_splits(ids(10), 1)) == std::array<std::size_t, 3>{8, 1, 1});
  CHECK(split_counts(assign_splits(ids(3), 1)) == std::array<std::size_t, 3>{2, 0, 1});
  CHECK_THROWS_AS(assign_splits(ids(2), 1), InvalidArgument);
  CHECK(assign_splits(ids(57), 42) == assign_splits(ids(57), 42));

  auto shuffled = ids(57);
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
  const auto a = assign_splits(ids(57), 42);
  const auto b = assign_splits(shuffled, 42);
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    const auto k = std::stoul(shuffled[i].substr(2));
    CHECK(b[i] == a[k]);
  }
  for (std::size_t n = 3; n < 300; ++n) {
    const auto c = split_counts(assign_splits(ids(n), n));
    CHECK(c[0] == (8 * n + 5) / 10);
    CHECK(c[1] == (n + 5) / 10);
    CHECK(c[0] + c[1] + c[2] == n);
  }
}

TEST_CASE("corpus round trip is byte identical") {
  std::ifstream in(SURVEYFORGE_TEST_DATA "/fixture/corpus.jsonl");
  REQUIRE(in);
  std::stringstream raw;
  raw << in.rdbuf();
  std::istringstream first(raw.str());
  const auto examples = read_corpus(first);
  REQUIRE(examples.size() == 5);
  const auto canonical = serialize_corpus(examples);
  std::istringstream second(canonical);
  CHECK(serialize_corpus(read_corpus(second)) == canonical);
  CHECK(canonical == raw.str());
}

TEST_CASE("corpus parsing errors name the line") {
  std::istringstream bad("{\"example_id\":\"a\",\"input_docs\":[],\"target_abs\":\"x\"}\nnot json\n");
  try {
    read_corpus(bad);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream no_target("{\"example_id\":\"a\",\"input_docs\":[]}\n");
  CHECK_THROWS_AS(read_corpus(no_target), FormatError);
}

TEST_CASE("ingest raw directory") {
  const fs::path root = fs::temp_directory_path() / "surveyforge_ingest_test";
  fs::remove_all(root);
  fs::create_directories(root / "t2" / "refs");
  fs::create_directories(root / "t1" / "refs");
  std::ofstream(root / "t1" / "refs" / "b.txt") << "Second reference. It has two sentences.";
  std::ofstream(root / "t1" / "refs" / "a.txt") << "First reference abstract.";
  std::ofstream(root / "t1" / "intro.txt") << "Surveys matter. We review methods.";
  std::ofstream(root / "t1" / "abstract.txt") << "This survey covers things.";
  std::ofstream(root / "t2" / "refs" / "x.txt") << "Only one.";
  std::ofstream(root / "t2" / "abstract.txt") << "Abstract two.";
  std::ofstream(root / "t2" / "body.txt") << "Abstract two. Body starts here and goes on.";

  const auto mds = ingest_raw_directory(root);
  REQUIRE(mds.size() == 2);
  CHECK(mds[0].example_id == "t1");
  REQUIRE(mds[0].input_docs.size() == 2);
  CHECK(mds[0].input_docs[0].doc_id == "a");
  CHECK(mds[0].input_docs[1].sentences.size() == 2);
  REQUIRE(mds[0].intro);
  CHECK(mds[0].intro->size() == 2);
  CHECK(mds[0].target_abs == "this survey covers things.");

  IngestOptions abs;
  abs.subset = Subset::Abs;
  const auto a = ingest_raw_directory(root, abs);
  REQUIRE(a.size() == 2);
  REQUIRE(a[1].input_docs.size() == 1);
  CHECK(a[1].target_abs == "abstract two.");
  fs::remove_all(root);
}

TEST_CASE("training sentences grouped by abstract") {
  std::istringstream in(
      "{\"abstract_id\":\"b\",\"sentence_index\":1,\"text\":\"We do X.\",\"label\":\"method\"}\n"
      "{\"abstract_id\":\"a\",\"sentence_index\":0,\"text\":\"Hi.\",\"label\":\"background\"}\n"
      "{\"abstract_id\":\"b\",\"sentence_index\":0,\"text\":\"Context.\",\"label\":\"background\"}\n");
  const auto groups = group_by_abstract(read_training_sentences(in));
  REQUIRE(groups.size() == 2);
  CHECK(groups[0][0].abstract_id == "b");
  CHECK(groups[0][0].sentence_index == 0);
  CHECK(groups[0][1].label == Category::Method);
  std::istringstream bad("{\"abstract_id\":\"b\",\"sentence_index\":1,\"text\":\"x\",\"label\":\"nope\"}\n");
  CHECK_THROWS_AS(read_training_sentences(bad), FormatError);
}
