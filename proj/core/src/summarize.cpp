#include "surveyforge/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "surveyforge/errors.hpp"

namespace surveyforge::summarize {
namespace {

std::unordered_map<std::string, double> term_frequencies(const SentenceRecord& s) {
  std::unordered_map<std::string, double> tf;
  for (const auto& t : s.tokens) tf[t] += 1.0;
  return tf;
}

void check_power_options(const PowerIterationOptions& o) {
  if (!(o.damping > 0.0 && o.damping < 1.0)) throw InvalidArgument("damping must be in (0,1)");
  if (!(o.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (o.max_iters == 0) throw InvalidArgument("max_iters must be positive");
}

// Trigrams are keyed by their three tokens joined with a unit separator.
std::vector<std::string> trigrams(const SentenceRecord& s) {
  std::vector<std::string> out;
  if (s.tokens.size() < 3) return out;
  out.reserve(s.tokens.size() - 2);
  for (std::size_t i = 0; i + 2 < s.tokens.size(); ++i) {
    out.push_back(s.tokens[i] + '\x1f' + s.tokens[i + 1] + '\x1f' + s.tokens[i + 2]);
  }
  return out;
}

}  // namespace

double IdfTable::operator()(const std::string& token) const {
  auto it = weights.find(token);
  return it == weights.end() ? fallback : it->second;
}

IdfTable IdfTable::from_sentences(std::span<const SentenceRecord> sentences) {
  std::unordered_map<std::string, double> df;
  for (const auto& s : sentences) {
    std::unordered_set<std::string_view> seen(s.tokens.begin(), s.tokens.end());
    for (auto t : seen) df[std::string(t)] += 1.0;
  }
  IdfTable idf;
  const double n = static_cast<double>(sentences.size());
  for (const auto& [t, d] : df) idf.weights.emplace(t, 1.0 + std::log((1.0 + n) / (1.0 + d)));
  return idf;
}

IdfTable IdfTable::uniform(double weight) {
  IdfTable idf;
  idf.fallback = weight;
  return idf;
}

double tfidf_cosine(const SentenceRecord& a, const SentenceRecord& b, const IdfTable& idf) {
  const auto ta = term_frequencies(a);
  const auto tb = term_frequencies(b);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [t, f] : ta) {
    const double w = idf(t);
    na += (f * w) * (f * w);
    if (auto it = tb.find(t); it != tb.end()) dot += f * it->second * w * w;
  }
  for (const auto& [t, f] : tb) {
    const double w = idf(t);
    nb += (f * w) * (f * w);
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

void SentenceGraph::set_weight(std::size_t i, std::size_t j, double w) noexcept {
  if (i == j) return;
  weights_[i * n_ + j] = w;
  weights_[j * n_ + i] = w;
}

std::vector<double> transition_matrix(const SentenceGraph& graph, double damping) {
  const std::size_t n = graph.size();
  const double uniform = 1.0 / static_cast<double>(n);
  const double teleport = (1.0 - damping) * uniform;
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = graph.row(i);
    const double out = std::accumulate(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double walk = out > 0.0 ? row[j] / out : uniform;
      m[i * n + j] = damping * walk + teleport;
    }
  }
  return m;
}

std::vector<double> stationary_distribution(const SentenceGraph& graph,
                                            const PowerIterationOptions& options) {
  check_power_options(options);
  const std::size_t n = graph.size();
  if (n == 0) throw InvalidArgument("cannot rank an empty sentence set");
  const auto m = transition_matrix(graph, options.damping);

  std::vector<double> s(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double si = s[i];
      const double* row = m.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) next[j] += si * row[j];
    }
    residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(next[j] - s[j]));
    if (residual < options.tolerance) return s;
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) s[j] = next[j] / total;
  }
  throw ConvergenceFailure(s, residual, options.max_iters);
}

SentenceGraph lexrank_graph(std::span<const SentenceRecord> sentences, double threshold,
                            const IdfTable& idf) {
  if (threshold < 0.0 || threshold > 1.0) throw InvalidArgument("lexrank threshold must be in [0,1]");
  SentenceGraph g(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (std::size_t j = i + 1; j < sentences.size(); ++j) {
      const double sim = tfidf_cosine(sentences[i], sentences[j], idf);
      if (threshold == 0.0) {
        g.set_weight(i, j, sim);
      } else if (sim >= threshold) {
        g.set_weight(i, j, 1.0);
      }
    }
  }
  return g;
}

SentenceGraph lexrank_graph(std::span<const SentenceRecord> sentences, double threshold) {
  return lexrank_graph(sentences, threshold, IdfTable::from_sentences(sentences));
}

std::vector<double> lexrank(std::span<const SentenceRecord> sentences, const LexRankOptions& options) {
  if (sentences.empty()) throw InvalidArgument("lexrank: no sentences");
  check_power_options(options.power);
  return stationary_distribution(lexrank_graph(sentences, options.threshold), options.power);
}

double textrank_similarity(const SentenceRecord& a, const SentenceRecord& b) {
  if (a.tokens.size() <= 1 || b.tokens.size() <= 1) return 0.0;
  std::set<std::string_view> ta(a.tokens.begin(), a.tokens.end());
  std::size_t shared = 0;
  std::set<std::string_view> counted;
  for (const auto& t : b.tokens) {
    if (ta.contains(t) && counted.insert(t).second) ++shared;
  }
  const double denom = std::log(static_cast<double>(a.tokens.size())) +
                       std::log(static_cast<double>(b.tokens.size()));
  return static_cast<double>(shared) / denom;
}

SentenceGraph textrank_graph(std::span<const SentenceRecord> sentences) {
  SentenceGraph g(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (std::size_t j = i + 1; j < sentences.size(); ++j) {
      g.set_weight(i, j, textrank_similarity(sentences[i], sentences[j]));
    }
  }
  return g;
}

std::vector<double> textrank(std::span<const SentenceRecord> sentences,
                             const PowerIterationOptions& options) {
  if (sentences.empty()) throw InvalidArgument("textrank: no sentences");
  check_power_options(options);
  return stationary_distribution(textrank_graph(sentences), options);
}

void SummaryBudget::validate() const {
  const bool words_ok = max_words && *max_words > 0;
  const bool sents_ok = max_sentences && *max_sentences > 0;
  if ((max_words && !words_ok) || (max_sentences && !sents_ok) || (!words_ok && !sents_ok)) {
    throw InvalidArgument("summary budget needs at least one positive bound");
  }
}

std::vector<std::size_t> select(std::span<const SentenceRecord> sentences,
                                std::span<const double> scores, const SummaryBudget& budget,
                                bool trigram_blocking) {
  if (sentences.size() != scores.size()) {
    throw InvalidArgument("select: scores and sentences differ in length");
  }
  budget.validate();
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::size_t> chosen;
  std::unordered_set<std::string> seen;
  std::size_t words = 0;
  for (std::size_t idx : order) {
    const auto& s = sentences[idx];
    std::vector<std::string> grams;
    if (trigram_blocking) {
      grams = trigrams(s);
      std::unordered_set<std::string_view> own;
      bool blocked = false;
      for (const auto& g : grams) {
        if (seen.contains(g) || !own.insert(g).second) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
    }
    if (budget.max_sentences && chosen.size() + 1 > *budget.max_sentences) break;
    if (budget.max_words && words + s.tokens.size() > *budget.max_words) break;
    chosen.push_back(idx);
    words += s.tokens.size();
    for (auto& g : grams) seen.insert(std::move(g));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::string_view to_string(Method m) noexcept {
  return m == Method::LexRank ? "lexrank" : "textrank";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "lexrank") return Method::LexRank;
  if (name == "textrank") return Method::TextRank;
  return std::nullopt;
}

std::string summarize_section(std::span<const SentenceRecord> sources,
                              const SummarizerOptions& options) {
  if (sources.empty()) return {};
  const auto scores = options.method == Method::LexRank ? lexrank(sources, options.lexrank)
                                                        : textrank(sources, options.lexrank.power);
  const auto picked = select(sources, scores, options.budget, options.trigram_blocking);
  std::string out;
  for (std::size_t i : picked) {
    if (sources[i].text.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += sources[i].text;
  }
  return out;
}

StructuredSummary summarize_pairs(const align::AlignedPairs& pairs,
                                  const SummarizerOptions& options) {
  StructuredSummary out;
  for (const auto& p : pairs) {
    out.sections.section(p.category) = summarize_section(p.source_sentences, options);
  }
  out.combined = out.sections.combined();
  return out;
}

StructuredSummary summarize_structured(const corpus::SurveyExample& example,
                                       const SummarizerOptions& options) {
  return summarize_pairs(align::align_example(example, options.alignment, options.fallback),
                         options);
}

}  // namespace surveyforge::summarize
