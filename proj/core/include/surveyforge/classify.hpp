#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "surveyforge/categories.hpp"
#include "surveyforge/corpus.hpp"
#include "surveyforge/sentence.hpp"

namespace surveyforge::classify {

/// SCC: a sentence with its neighbours as context (used on survey
/// introductions). SSC: every sentence of an abstract with sequence position
/// features (used on reference abstracts).
enum class FeatureMode { Scc, Ssc };

std::string_view to_string(FeatureMode m) noexcept;
std::optional<FeatureMode> parse_mode(std::string_view name);

/// Weighted multiset of features. Ordered so iteration is deterministic.
using FeatureBag = std::map<std::string, double, std::less<>>;

// Marker features. '<' is always split off by the tokenizer, so these can
// never collide with a word token.
inline constexpr std::string_view kBosMarker = "<bos>";
inline constexpr std::string_view kEosMarker = "<eos>";
inline constexpr std::string_view kIsFirst = "<is-first>";
inline constexpr std::string_view kIsLast = "<is-last>";
inline constexpr std::array<std::string_view, 5> kPositionFeatures = {
    "<pos:first>", "<pos:early>", "<pos:middle>", "<pos:late>", "<pos:last>"};

inline constexpr double kContextWeight = 0.5;

/// Target tokens at weight 1, neighbour tokens at kContextWeight, and a
/// boundary marker for each absent neighbour.
FeatureBag featurize_scc(const SentenceRecord& target, const SentenceRecord* prev,
                         const SentenceRecord* next);

/// SCC bags plus the position quintile floor(5 * i / n) and first/last flags.
/// Throws InvalidArgument on an empty abstract.
std::vector<FeatureBag> featurize_ssc(std::span<const SentenceRecord> abstract);

struct TrainingExample {
  FeatureBag features;
  Category label = Category::Other;
};

struct Prediction {
  Category category = Category::Other;
  std::array<double, kCategoryCount> probabilities{};

  double confidence() const noexcept { return probabilities[index_of(category)]; }
};

/// Smoothed bag-of-features classifier (multinomial naive Bayes with an
/// explicit unknown-feature slot).
///
///   prior(c)    = examples(c) / examples
///   P(f | c)    = (w(f, c) + a) / (W(c) + a * (|V| + 1))
///   P(unk | c)  = a / (W(c) + a * (|V| + 1))
///   score(c)    = log prior(c) + sum_f w_f log P(f | c) / sum_f w_f
///
/// The likelihood term is averaged per unit of feature weight, which makes
/// the decision invariant to scaling a bag. Immutable once built.
class ClassifierModel {
 public:
  using Json = nlohmann::ordered_json;

  /// Throws InvalidArgument on an empty set or non-positive smoothing.
  static ClassifierModel train(std::span<const TrainingExample> examples, FeatureMode mode,
                               double smoothing);

  Prediction predict(const FeatureBag& features) const;

  FeatureMode mode() const noexcept { return mode_; }
  double smoothing() const noexcept { return smoothing_; }
  std::size_t vocabulary_size() const noexcept { return weights_.size(); }
  std::array<double, kCategoryCount> priors() const;
  /// P(feature | c); unseen features get the unknown-slot probability.
  double likelihood(std::string_view feature, Category c) const;
  double unknown_likelihood(Category c) const;
  std::vector<std::string> vocabulary() const;

  Json to_json() const;
  static ClassifierModel from_json(const Json& j);
  void save(const std::filesystem::path& path) const;
  static ClassifierModel load(const std::filesystem::path& path);

  static constexpr int kFormatVersion = 1;

 private:
  void finalize();

  FeatureMode mode_ = FeatureMode::Ssc;
  double smoothing_ = 1.0;
  std::array<double, kCategoryCount> example_counts_{};
  std::array<double, kCategoryCount> total_weight_{};
  std::map<std::string, std::array<double, kCategoryCount>, std::less<>> weights_;

  std::array<double, kCategoryCount> log_prior_{};
  std::array<double, kCategoryCount> log_denominator_{};
};

/// Builds SSC or SCC training bags from labeled abstracts (each inner vector
/// is one abstract in sentence order) and trains.
ClassifierModel train_on_abstracts(
    std::span<const std::vector<std::pair<SentenceRecord, Category>>> abstracts,
    FeatureMode mode, double smoothing);

/// Requires an SSC model; labels follow sentence order.
std::vector<LabeledSentence> classify_abstract(const ClassifierModel& model,
                                               std::span<const SentenceRecord> sentences);
std::vector<LabeledSentence> classify_abstract(const ClassifierModel& model,
                                               const corpus::ReferenceDoc& doc);

/// Requires an SCC model; each sentence is classified with its neighbours.
std::vector<LabeledSentence> classify_intro(const ClassifierModel& model,
                                            std::span<const SentenceRecord> sentences);

/// Pairs sentences with externally supplied labels (confidence 1).
std::vector<LabeledSentence> attach_labels(std::span<const SentenceRecord> sentences,
                                           std::span<const Category> labels);

}  // namespace surveyforge::classify
