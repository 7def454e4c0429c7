#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveyforge/align.hpp"
#include "surveyforge/classify.hpp"
#include "surveyforge/corpus.hpp"
#include "surveyforge/corpus_stats.hpp"
#include "surveyforge/summarize.hpp"

namespace surveyforge::pipeline {

struct Paths {
  std::filesystem::path corpus;
  std::filesystem::path train;
  std::filesystem::path output;
};

struct PreprocessSettings {
  corpus::InputCaps caps;
  std::int64_t body_limit = corpus::kShortBodyWords;
  corpus::FilterThresholds filter;
};

struct ClassifierSettings {
  classify::FeatureMode mode = classify::FeatureMode::Ssc;
  double smoothing = 1.0;
};

struct StatsSettings {
  eval::TargetChoice target = eval::TargetChoice::Auto;
  std::size_t grid_size = 512;
};

enum class Stage { Preprocess, Train, Classify, Align, Summarize, Evaluate, Stats };

std::string_view to_string(Stage s) noexcept;
std::optional<Stage> parse_stage(std::string_view name);

inline constexpr std::array<Stage, 7> kAllStages = {Stage::Preprocess, Stage::Train,
                                                    Stage::Classify,   Stage::Align,
                                                    Stage::Summarize,  Stage::Evaluate,
                                                    Stage::Stats};

struct PipelineConfig {
  Paths paths;
  PreprocessSettings preprocess;
  ClassifierSettings classifier;
  summarize::SummarizerOptions summarizer;
  StatsSettings stats;
  bool keep_empty_targets = false;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::vector<Stage> stages{kAllStages.begin(), kAllStages.end()};
};

struct Diagnostic {
  /// Dotted key path such as "summarizer.damping"; empty for syntax errors.
  std::string key;
  std::size_t line = 0;
  std::string message;

  std::string to_string() const;
};

struct ConfigResult {
  PipelineConfig config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return diagnostics.empty(); }
};

/// Parses the INI-style config:
///
///   # comment
///   [summarizer]
///   damping = 0.85
///
/// Omitted keys keep their defaults. Every problem is reported, each with
/// its key path and line: syntax errors, unknown sections or keys, duplicate
/// keys, unparsable values and out-of-range values.
ConfigResult validate_config(std::string_view text);

/// Relative paths in the file are resolved against the file's directory.
ConfigResult load_config(const std::filesystem::path& path);

/// Canonical config text with every key. render_config(PipelineConfig{}) is
/// the defaults table printed by `surveyforge defaults`.
std::string render_config(const PipelineConfig& config);

nlohmann::ordered_json config_to_json(const PipelineConfig& config);

/// Range checks shared by the config parser and CLI overrides.
std::vector<Diagnostic> check_ranges(const PipelineConfig& config);

}  // namespace surveyforge::pipeline
