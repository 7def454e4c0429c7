#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveyforge/categories.hpp"
#include "surveyforge/corpus.hpp"

namespace surveyforge::corpus {

using Json = nlohmann::ordered_json;

// Corpus files hold one JSON object per line:
//   {"example_id": str,
//    "input_docs": [{"doc_id": str, "abstract": str, "labels"?: [str]}],
//    "intro"?: str, "intro_labels"?: [str],
//    "target_mds"?: {"background": str, "method": str, "other": str},
//    "target_abs"?: str, "split"?: "train"|"validation"|"test"}
// Text fields are split into sentences and normalized on load; serializing a
// loaded example yields the canonical line, and canonical lines round-trip
// byte-for-byte.

Json to_json(const SurveyExample& example);
SurveyExample example_from_json(const Json& record);

std::string serialize_example(const SurveyExample& example);
SurveyExample parse_example(std::string_view line);

/// Streams examples from a line-delimited corpus. Blank lines are skipped.
/// Parse errors are rethrown as FormatError naming the line number.
void for_each_example(std::istream& in, const std::function<void(SurveyExample&&)>& fn);

std::vector<SurveyExample> read_corpus(std::istream& in);
std::vector<SurveyExample> read_corpus(const std::filesystem::path& path);
std::string serialize_corpus(const std::vector<SurveyExample>& examples);

/// One row of a labeled-sentence training file:
///   {"abstract_id": str, "sentence_index": int, "text": str, "label": str}
struct TrainingSentence {
  std::string abstract_id;
  std::int64_t sentence_index = 0;
  SentenceRecord sentence;
  Category label = Category::Other;
};

std::vector<TrainingSentence> read_training_sentences(std::istream& in);
std::vector<TrainingSentence> read_training_sentences(const std::filesystem::path& path);

/// Groups rows by abstract_id (first-seen order) and sorts each group by
/// sentence_index.
std::vector<std::vector<TrainingSentence>> group_by_abstract(std::vector<TrainingSentence> rows);

enum class Subset { Mds, Abs };

struct IngestOptions {
  Subset subset = Subset::Mds;
  /// Body words used for the abstract subset's input.
  std::int64_t body_limit = kShortBodyWords;
  /// Words taken after the abstract when a topic has no intro.txt.
  std::int64_t intro_fallback_words = kShortBodyWords;
  /// Prepend the survey's own abstract to the abstract-subset input.
  bool abs_include_abstract = false;
};

/// Reads `DIR/<topic>/refs/*.txt`, `intro.txt`, `abstract.txt` and the
/// optional `body.txt`. Topics are visited in lexicographic order and
/// references sorted by file name, so output is deterministic.
std::vector<SurveyExample> ingest_raw_directory(const std::filesystem::path& dir,
                                                const IngestOptions& options = {});

}  // namespace surveyforge::corpus
