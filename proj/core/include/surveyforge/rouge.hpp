#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "surveyforge/corpus.hpp"

namespace surveyforge::eval {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double overlap, double candidate_total, double reference_total);
};

using Tokens = std::span<const std::string>;

/// Clipped n-gram overlap. Empty n-gram sets give zero scores.
/// Throws InvalidArgument when n == 0.
RougeScore rouge_n(Tokens candidate, Tokens reference, std::size_t n);

/// Length of the longest common subsequence (bit-parallel, O(n * m / 64)).
std::size_t lcs_length(Tokens a, Tokens b);

/// Whole-text LCS: p = L/|cand|, r = L/|ref|.
RougeScore rouge_l(Tokens candidate, Tokens reference);

struct RougeTriple {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
};

RougeTriple rouge_all(Tokens candidate, Tokens reference);

struct StructuredRouge {
  RougeTriple background;
  RougeTriple method;
  RougeTriple other;
  RougeTriple combined;

  const RougeTriple& section(CoarseCategory c) const noexcept;
  RougeTriple& section(CoarseCategory c) noexcept;
};

/// Per-section scores plus the score of the two concatenations
/// (background -> method -> other on both sides).
StructuredRouge evaluate_structured(const corpus::TargetSections& produced,
                                    const corpus::TargetSections& reference);

/// Unweighted mean over examples, field by field.
StructuredRouge mean(std::span<const StructuredRouge> scores);
RougeTriple mean(std::span<const RougeTriple> scores);

}  // namespace surveyforge::eval
