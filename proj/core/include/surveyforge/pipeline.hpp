#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveyforge/classify.hpp"
#include "surveyforge/config.hpp"
#include "surveyforge/corpus.hpp"
#include "surveyforge/corpus_io.hpp"
#include "surveyforge/corpus_stats.hpp"
#include "surveyforge/rouge.hpp"

namespace surveyforge::pipeline {

using Json = nlohmann::ordered_json;

/// A stage failed; names the stage and, when known, the example.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::string example_id, const std::string& what)
      : std::runtime_error(format(stage, example_id, what)),
        stage_(std::move(stage)),
        example_id_(std::move(example_id)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& example_id() const noexcept { return example_id_; }

 private:
  static std::string format(const std::string& stage, const std::string& id, const std::string& what) {
    return "stage " + stage + (id.empty() ? "" : " (example " + id + ")") + ": " + what;
  }
  std::string stage_;
  std::string example_id_;
};

/// Hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it into place, so readers see
/// either the old file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// ---- stage bodies, shared by `surveyforge run` and the single-stage commands

struct PreprocessLog {
  std::size_t read = 0;
  std::size_t kept = 0;
  std::vector<std::pair<std::string, std::string>> dropped;  // (example_id, reason)
};

/// Truncates inputs, filters short examples and assigns splits. Throws
/// StageError when the corpus is empty or too small to split.
std::vector<corpus::SurveyExample> preprocess_corpus(std::vector<corpus::SurveyExample> examples,
                                                     const PreprocessSettings& settings,
                                                     std::uint64_t seed, PreprocessLog* log = nullptr);

/// Trains the abstract (SSC) and introduction (SCC) classifiers.
std::pair<classify::ClassifierModel, classify::ClassifierModel> train_models(
    const std::vector<corpus::TrainingSentence>& rows, double smoothing);

classify::ClassifierModel train_model(const std::vector<corpus::TrainingSentence>& rows,
                                      classify::FeatureMode mode, double smoothing);

/// Fills missing document labels with the SSC model and missing intro labels
/// with the SCC model, then builds target_mds from the labeled intro.
/// Existing labels pass through untouched. Either model may be null when the
/// corpus already carries the labels it would produce.
std::vector<corpus::SurveyExample> classify_corpus(std::vector<corpus::SurveyExample> examples,
                                                   const classify::ClassifierModel* abstract_model,
                                                   const classify::ClassifierModel* intro_model,
                                                   std::size_t jobs);

/// Line-delimited {example_id, category, source_text, target_text, fallback_used}.
std::string align_corpus(const std::vector<corpus::SurveyExample>& examples, align::Mode mode,
                         align::EmptyCategoryFallback fallback, bool keep_empty_targets,
                         std::size_t jobs);

struct SummaryRecord {
  std::string example_id;
  corpus::TargetSections sections;
  std::string combined;
};

/// Structured summaries for examples with an MDS target; examples with only
/// an abstract target get a single summary of their whole input.
std::vector<SummaryRecord> summarize_corpus(const std::vector<corpus::SurveyExample>& examples,
                                            const summarize::SummarizerOptions& options,
                                            std::size_t jobs);

std::string serialize_summaries(const std::vector<SummaryRecord>& summaries);
std::vector<SummaryRecord> parse_summaries(std::istream& in);

/// Corpus-mean ROUGE of predictions against the references' targets.
Json evaluate_summaries(const std::vector<SummaryRecord>& predictions,
                        const std::vector<corpus::SurveyExample>& references);

Json stats_to_json(const eval::CorpusReport& report);

/// CSV with columns metric,grid,density. Metrics with fewer than two
/// distinct values are skipped.
std::string kde_csv(const eval::CorpusReport& report, std::size_t grid_size);

// ---- full pipeline

struct StageOutcome {
  Stage stage;
  bool skipped = false;
  std::vector<std::filesystem::path> outputs;
};

struct RunResult {
  int exit_code = 0;
  std::vector<StageOutcome> stages;
  std::string diagnostic;
};

/// Runs the configured stages in order into config.paths.output. Each
/// stage's outputs are written atomically; manifest.json records the config
/// hash and per-stage input/output digests, and a stage whose inputs,
/// config and outputs match the manifest is skipped.
RunResult run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

}  // namespace surveyforge::pipeline
