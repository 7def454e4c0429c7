#include "surveyforge/classify.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "surveyforge/errors.hpp"

namespace surveyforge::classify {
namespace {

constexpr std::string_view kFormatName = "surveyforge.classifier";

void add_tokens(FeatureBag& bag, const std::vector<std::string>& tokens, double weight) {
  for (const auto& t : tokens) {
    auto it = bag.find(t);
    if (it == bag.end()) {
      bag.emplace(t, weight);
    } else {
      it->second += weight;
    }
  }
}

}  // namespace

std::string_view to_string(FeatureMode m) noexcept { return m == FeatureMode::Scc ? "scc" : "ssc"; }

std::optional<FeatureMode> parse_mode(std::string_view name) {
  if (name == "scc") return FeatureMode::Scc;
  if (name == "ssc") return FeatureMode::Ssc;
  return std::nullopt;
}

FeatureBag featurize_scc(const SentenceRecord& target, const SentenceRecord* prev,
                         const SentenceRecord* next) {
  FeatureBag bag;
  add_tokens(bag, target.tokens, 1.0);
  if (prev) {
    add_tokens(bag, prev->tokens, kContextWeight);
  } else {
    bag.emplace(kBosMarker, 1.0);
  }
  if (next) {
    add_tokens(bag, next->tokens, kContextWeight);
  } else {
    bag.emplace(kEosMarker, 1.0);
  }
  return bag;
}

std::vector<FeatureBag> featurize_ssc(std::span<const SentenceRecord> abstract) {
  if (abstract.empty()) throw InvalidArgument("featurize_ssc: empty abstract");
  const std::size_t n = abstract.size();
  std::vector<FeatureBag> bags;
  bags.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto bag = featurize_scc(abstract[i], i > 0 ? &abstract[i - 1] : nullptr,
                             i + 1 < n ? &abstract[i + 1] : nullptr);
    bag.emplace(kPositionFeatures[(5 * i) / n], 1.0);
    if (i == 0) bag.emplace(kIsFirst, 1.0);
    if (i + 1 == n) bag.emplace(kIsLast, 1.0);
    bags.push_back(std::move(bag));
  }
  return bags;
}

ClassifierModel ClassifierModel::train(std::span<const TrainingExample> examples, FeatureMode mode,
                                       double smoothing) {
  if (examples.empty()) throw InvalidArgument("train: empty training set");
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw InvalidArgument("train: smoothing must be positive");
  }
  ClassifierModel m;
  m.mode_ = mode;
  m.smoothing_ = smoothing;
  for (const auto& ex : examples) {
    const auto c = index_of(ex.label);
    m.example_counts_[c] += 1.0;
    for (const auto& [feature, weight] : ex.features) {
      auto it = m.weights_.find(feature);
      if (it == m.weights_.end()) it = m.weights_.emplace(feature, std::array<double, kCategoryCount>{}).first;
      it->second[c] += weight;
      m.total_weight_[c] += weight;
    }
  }
  m.finalize();
  return m;
}

void ClassifierModel::finalize() {
  double n = 0.0;
  for (double c : example_counts_) n += c;
  const double slots = static_cast<double>(weights_.size()) + 1.0;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    log_prior_[c] = example_counts_[c] > 0.0 ? std::log(example_counts_[c] / n)
                                             : -std::numeric_limits<double>::infinity();
    log_denominator_[c] = std::log(total_weight_[c] + smoothing_ * slots);
  }
}

std::array<double, kCategoryCount> ClassifierModel::priors() const {
  double n = 0.0;
  for (double c : example_counts_) n += c;
  std::array<double, kCategoryCount> p{};
  for (std::size_t c = 0; c < kCategoryCount; ++c) p[c] = example_counts_[c] / n;
  return p;
}

double ClassifierModel::likelihood(std::string_view feature, Category c) const {
  const auto k = index_of(c);
  auto it = weights_.find(feature);
  const double w = it == weights_.end() ? 0.0 : it->second[k];
  return (w + smoothing_) / std::exp(log_denominator_[k]);
}

double ClassifierModel::unknown_likelihood(Category c) const {
  return smoothing_ / std::exp(log_denominator_[index_of(c)]);
}

std::vector<std::string> ClassifierModel::vocabulary() const {
  std::vector<std::string> v;
  v.reserve(weights_.size());
  for (const auto& [f, _] : weights_) v.push_back(f);
  return v;
}

Prediction ClassifierModel::predict(const FeatureBag& features) const {
  std::array<double, kCategoryCount> score = log_prior_;
  double total = 0.0;
  for (const auto& [_, w] : features) total += w;
  if (total > 0.0) {
    std::array<double, kCategoryCount> loglik{};
    for (const auto& [feature, w] : features) {
      if (w == 0.0) continue;
      auto it = weights_.find(feature);
      for (std::size_t c = 0; c < kCategoryCount; ++c) {
        const double count = it == weights_.end() ? 0.0 : it->second[c];
        loglik[c] += w * (std::log(count + smoothing_) - log_denominator_[c]);
      }
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c) score[c] += loglik[c] / total;
  }

  Prediction p;
  std::size_t best = 0;
  for (std::size_t c = 1; c < kCategoryCount; ++c) {
    if (score[c] > score[best]) best = c;
  }
  p.category = kAllCategories[best];
  double norm = 0.0;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    p.probabilities[c] = std::isinf(score[c]) ? 0.0 : std::exp(score[c] - score[best]);
    norm += p.probabilities[c];
  }
  for (auto& v : p.probabilities) v /= norm;
  return p;
}

ClassifierModel::Json ClassifierModel::to_json() const {
  Json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["mode"] = std::string(classify::to_string(mode_));
  j["smoothing"] = smoothing_;
  Json cats = Json::array();
  for (auto c : kAllCategories) cats.push_back(std::string(surveyforge::to_string(c)));
  j["categories"] = std::move(cats);
  j["example_counts"] = example_counts_;
  Json w = Json::object();
  for (const auto& [f, counts] : weights_) w[f] = counts;
  j["feature_weights"] = std::move(w);
  return j;
}

ClassifierModel ClassifierModel::from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormatName) throw FormatError("not a classifier model");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw FormatError("unsupported classifier model version " + std::to_string(version));
    }
    const auto& cats = j.at("categories");
    if (cats.size() != kCategoryCount) throw FormatError("model must list 5 categories");
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      if (parse_category(cats[c].get<std::string>()) != kAllCategories[c]) {
        throw FormatError("model category order mismatch");
      }
    }
    ClassifierModel m;
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw FormatError("unknown feature mode");
    m.mode_ = *mode;
    m.smoothing_ = j.at("smoothing").get<double>();
    if (!(m.smoothing_ > 0.0)) throw FormatError("smoothing must be positive");
    m.example_counts_ = j.at("example_counts").get<std::array<double, kCategoryCount>>();
    for (const auto& [f, counts] : j.at("feature_weights").items()) {
      auto arr = counts.get<std::array<double, kCategoryCount>>();
      for (std::size_t c = 0; c < kCategoryCount; ++c) m.total_weight_[c] += arr[c];
      m.weights_.emplace(f, arr);
    }
    double n = 0.0;
    for (double c : m.example_counts_) n += c;
    if (!(n > 0.0)) throw FormatError("model has no training examples");
    m.finalize();
    return m;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("classifier model: ") + e.what());
  }
}

void ClassifierModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write model " + path.string());
  out << to_json().dump(1) << '\n';
}

ClassifierModel ClassifierModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

ClassifierModel train_on_abstracts(
    std::span<const std::vector<std::pair<SentenceRecord, Category>>> abstracts,
    FeatureMode mode, double smoothing) {
  std::vector<TrainingExample> examples;
  for (const auto& abstract : abstracts) {
    if (abstract.empty()) continue;
    std::vector<SentenceRecord> sentences;
    sentences.reserve(abstract.size());
    for (const auto& [s, _] : abstract) sentences.push_back(s);
    if (mode == FeatureMode::Ssc) {
      auto bags = featurize_ssc(sentences);
      for (std::size_t i = 0; i < bags.size(); ++i) {
        examples.push_back({std::move(bags[i]), abstract[i].second});
      }
    } else {
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        examples.push_back({featurize_scc(sentences[i], i > 0 ? &sentences[i - 1] : nullptr,
                                          i + 1 < sentences.size() ? &sentences[i + 1] : nullptr),
                            abstract[i].second});
      }
    }
  }
  return ClassifierModel::train(examples, mode, smoothing);
}

std::vector<LabeledSentence> classify_abstract(const ClassifierModel& model,
                                               std::span<const SentenceRecord> sentences) {
  if (model.mode() != FeatureMode::Ssc) {
    throw InvalidArgument("classify_abstract: model feature mode must be ssc");
  }
  std::vector<LabeledSentence> out;
  if (sentences.empty()) return out;
  const auto bags = featurize_ssc(sentences);
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto p = model.predict(bags[i]);
    out.push_back(LabeledSentence::make(sentences[i], p.category, p.confidence()));
  }
  return out;
}

std::vector<LabeledSentence> classify_abstract(const ClassifierModel& model,
                                               const corpus::ReferenceDoc& doc) {
  return classify_abstract(model, std::span<const SentenceRecord>(doc.sentences));
}

std::vector<LabeledSentence> classify_intro(const ClassifierModel& model,
                                            std::span<const SentenceRecord> sentences) {
  if (model.mode() != FeatureMode::Scc) {
    throw InvalidArgument("classify_intro: model feature mode must be scc");
  }
  std::vector<LabeledSentence> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto bag = featurize_scc(sentences[i], i > 0 ? &sentences[i - 1] : nullptr,
                                   i + 1 < sentences.size() ? &sentences[i + 1] : nullptr);
    const auto p = model.predict(bag);
    out.push_back(LabeledSentence::make(sentences[i], p.category, p.confidence()));
  }
  return out;
}

std::vector<LabeledSentence> attach_labels(std::span<const SentenceRecord> sentences,
                                           std::span<const Category> labels) {
  if (sentences.size() != labels.size()) {
    throw InvalidArgument("attach_labels: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(sentences.size()) + " sentences");
  }
  std::vector<LabeledSentence> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out.push_back(LabeledSentence::make(sentences[i], labels[i]));
  }
  return out;
}

}  // namespace surveyforge::classify
