#include "surveyforge/rouge.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include "surveyforge/errors.hpp"
#include "surveyforge/text.hpp"

namespace surveyforge::eval {
namespace {

std::unordered_map<std::string, std::size_t> ngram_counts(Tokens tokens, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  std::string key;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

template <typename F>
void for_each_score(RougeTriple& t, F&& f) {
  f(t.r1);
  f(t.r2);
  f(t.rl);
}

}  // namespace

RougeScore RougeScore::from_counts(double overlap, double candidate_total, double reference_total) {
  RougeScore s;
  s.precision = candidate_total > 0.0 ? overlap / candidate_total : 0.0;
  s.recall = reference_total > 0.0 ? overlap / reference_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

RougeScore rouge_n(Tokens candidate, Tokens reference, std::size_t n) {
  if (n == 0) throw InvalidArgument("rouge_n: n must be >= 1");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  const std::size_t cand_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
  const std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;
  return RougeScore::from_counts(static_cast<double>(overlap), static_cast<double>(cand_total),
                                 static_cast<double>(ref_total));
}

// Hyyro's bit-vector LCS: V holds a 1 for every row of `b` not yet matched;
// each symbol of `a` updates V with V' = (V + (V & M)) | (V & ~M), carried
// across 64-bit words. LCS = |b| - popcount(V).
std::size_t lcs_length(Tokens a, Tokens b) {
  if (a.empty() || b.empty()) return 0;
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t m = b.size();
  const std::size_t words = (m + 63) / 64;

  std::unordered_map<std::string_view, std::vector<std::uint64_t>> match;
  for (std::size_t i = 0; i < m; ++i) {
    auto& mask = match[b[i]];
    if (mask.empty()) mask.assign(words, 0);
    mask[i / 64] |= std::uint64_t{1} << (i % 64);
  }

  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  if (m % 64) v.back() = (std::uint64_t{1} << (m % 64)) - 1;
  const std::uint64_t top_mask = v.back();

  for (const auto& symbol : a) {
    auto it = match.find(symbol);
    if (it == match.end()) continue;
    const auto& mask = it->second;
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & mask[w];
      const std::uint64_t sum1 = v[w] + u;
      const std::uint64_t c1 = sum1 < v[w] ? 1 : 0;
      const std::uint64_t sum = sum1 + carry;
      const std::uint64_t c2 = sum < sum1 ? 1 : 0;
      carry = c1 | c2;
      v[w] = sum | (v[w] - u);
    }
    v.back() &= top_mask;
  }
  std::size_t unmatched = 0;
  for (auto w : v) unmatched += static_cast<std::size_t>(std::popcount(w));
  return m - unmatched;
}

RougeScore rouge_l(Tokens candidate, Tokens reference) {
  const auto l = static_cast<double>(lcs_length(candidate, reference));
  return RougeScore::from_counts(l, static_cast<double>(candidate.size()),
                                 static_cast<double>(reference.size()));
}

RougeTriple rouge_all(Tokens candidate, Tokens reference) {
  return {rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2),
          rouge_l(candidate, reference)};
}

const RougeTriple& StructuredRouge::section(CoarseCategory c) const noexcept {
  switch (c) {
    case CoarseCategory::Background: return background;
    case CoarseCategory::Method: return method;
    case CoarseCategory::Other: return other;
  }
  return other;
}

RougeTriple& StructuredRouge::section(CoarseCategory c) noexcept {
  return const_cast<RougeTriple&>(std::as_const(*this).section(c));
}

StructuredRouge evaluate_structured(const corpus::TargetSections& produced,
                                    const corpus::TargetSections& reference) {
  StructuredRouge out;
  std::vector<std::string> all_produced;
  std::vector<std::string> all_reference;
  for (auto c : kAllCoarse) {
    const auto p = tokenize(produced.section(c));
    const auto r = tokenize(reference.section(c));
    out.section(c) = rouge_all(p, r);
    all_produced.insert(all_produced.end(), p.begin(), p.end());
    all_reference.insert(all_reference.end(), r.begin(), r.end());
  }
  out.combined = rouge_all(all_produced, all_reference);
  return out;
}

RougeTriple mean(std::span<const RougeTriple> scores) {
  RougeTriple acc;
  if (scores.empty()) return acc;
  for (const auto& s : scores) {
    RougeTriple copy = s;
    auto add = [](RougeScore& dst, const RougeScore& src) {
      dst.precision += src.precision;
      dst.recall += src.recall;
      dst.f1 += src.f1;
    };
    add(acc.r1, copy.r1);
    add(acc.r2, copy.r2);
    add(acc.rl, copy.rl);
  }
  const double n = static_cast<double>(scores.size());
  for_each_score(acc, [n](RougeScore& s) {
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
  });
  return acc;
}

StructuredRouge mean(std::span<const StructuredRouge> scores) {
  StructuredRouge out;
  std::vector<RougeTriple> column;
  column.reserve(scores.size());
  auto project = [&](auto member) {
    column.clear();
    for (const auto& s : scores) column.push_back(s.*member);
    return mean(std::span<const RougeTriple>(column));
  };
  out.background = project(&StructuredRouge::background);
  out.method = project(&StructuredRouge::method);
  out.other = project(&StructuredRouge::other);
  out.combined = project(&StructuredRouge::combined);
  return out;
}

}  // namespace surveyforge::eval
