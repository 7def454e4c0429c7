#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "surveyforge/align.hpp"
#include "surveyforge/corpus.hpp"
#include "surveyforge/sentence.hpp"

namespace surveyforge::summarize {

/// Inverse document frequencies over a set of sentences. Tokens missing from
/// the table weigh `fallback`.
struct IdfTable {
  std::unordered_map<std::string, double> weights;
  double fallback = 0.0;

  double operator()(const std::string& token) const;

  /// 1 + ln((1 + N) / (1 + df)) over the given sentences.
  static IdfTable from_sentences(std::span<const SentenceRecord> sentences);
  static IdfTable uniform(double weight);
};

/// Cosine of the tf*idf vectors of two sentences, clamped to [0, 1]; 0 when
/// either vector has zero norm.
double tfidf_cosine(const SentenceRecord& a, const SentenceRecord& b, const IdfTable& idf);

/// Dense symmetric edge-weight matrix over sentences, zero diagonal.
class SentenceGraph {
 public:
  explicit SentenceGraph(std::size_t n) : n_(n), weights_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double weight(std::size_t i, std::size_t j) const noexcept { return weights_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i). Self loops are ignored.
  void set_weight(std::size_t i, std::size_t j, double w) noexcept;
  std::span<const double> row(std::size_t i) const noexcept {
    return {weights_.data() + i * n_, n_};
  }

 private:
  std::size_t n_;
  std::vector<double> weights_;
};

struct PowerIterationOptions {
  double damping = 0.85;
  double tolerance = 1e-8;
  std::size_t max_iters = 1000;
};

/// Row-stochastic transition matrix of the damped random walk on `graph`:
/// rows are normalized edge weights, dangling rows are uniform, and every
/// entry is mixed with the uniform teleport (1 - d) / n. Row-major n*n.
std::vector<double> transition_matrix(const SentenceGraph& graph, double damping);

/// Stationary distribution of transition_matrix(graph, damping) by power
/// iteration from the uniform vector. Returns the first iterate s with
/// max|s M - s| < tolerance. Throws InvalidArgument on bad options and
/// ConvergenceFailure when max_iters is exhausted.
std::vector<double> stationary_distribution(const SentenceGraph& graph,
                                            const PowerIterationOptions& options);

struct LexRankOptions {
  /// Edge iff similarity >= threshold. 0 selects continuous LexRank, where
  /// edges carry the similarity itself.
  double threshold = 0.1;
  PowerIterationOptions power;
};

SentenceGraph lexrank_graph(std::span<const SentenceRecord> sentences, double threshold,
                            const IdfTable& idf);
SentenceGraph lexrank_graph(std::span<const SentenceRecord> sentences, double threshold);

/// Throws InvalidArgument for an empty sentence list.
std::vector<double> lexrank(std::span<const SentenceRecord> sentences,
                            const LexRankOptions& options = {});

/// |shared token types| / (ln|Si| + ln|Sj|); 0 when either sentence has at
/// most one token.
double textrank_similarity(const SentenceRecord& a, const SentenceRecord& b);
SentenceGraph textrank_graph(std::span<const SentenceRecord> sentences);

std::vector<double> textrank(std::span<const SentenceRecord> sentences,
                             const PowerIterationOptions& options = {});

struct SummaryBudget {
  std::optional<std::size_t> max_words;
  std::optional<std::size_t> max_sentences;

  /// Throws InvalidArgument unless at least one positive bound is set.
  void validate() const;
};

/// Greedy selection by descending score (ties by index). With blocking on, a
/// candidate is skipped when any of its word trigrams already occurs in the
/// selection (or earlier in itself). Selection stops at the first candidate
/// that would overflow the budget. Returned indices are in original order.
std::vector<std::size_t> select(std::span<const SentenceRecord> sentences,
                                std::span<const double> scores, const SummaryBudget& budget,
                                bool trigram_blocking);

enum class Method { LexRank, TextRank };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name);

struct SummarizerOptions {
  Method method = Method::LexRank;
  align::Mode alignment = align::Mode::CategoryBased;
  align::EmptyCategoryFallback fallback = align::EmptyCategoryFallback::FlagEmpty;
  SummaryBudget budget{350, std::nullopt};
  bool trigram_blocking = true;
  LexRankOptions lexrank;
};

struct StructuredSummary {
  corpus::TargetSections sections;
  std::string combined;
};

/// Ranks and selects one section from its aligned source sentences.
std::string summarize_section(std::span<const SentenceRecord> sources,
                              const SummarizerOptions& options);

StructuredSummary summarize_pairs(const align::AlignedPairs& pairs,
                                  const SummarizerOptions& options);

/// Aligns the example, then summarizes each section. Errors from the ranker
/// propagate.
StructuredSummary summarize_structured(const corpus::SurveyExample& example,
                                       const SummarizerOptions& options);

}  // namespace surveyforge::summarize
