#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "surveyforge/sentence.hpp"

namespace surveyforge {

/// Rhetorical role of a sentence. Enumerator order is the tie-break order.
enum class Category { Background = 0, Objective, Method, Result, Other };

/// Section of a structured summary.
enum class CoarseCategory { Background = 0, Method, Other };

inline constexpr std::size_t kCategoryCount = 5;
inline constexpr std::size_t kCoarseCount = 3;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::Background, Category::Objective, Category::Method, Category::Result,
    Category::Other};
inline constexpr std::array<CoarseCategory, kCoarseCount> kAllCoarse = {
    CoarseCategory::Background, CoarseCategory::Method, CoarseCategory::Other};

/// Objective, Result and Other collapse into the "other" section.
constexpr CoarseCategory coarsen(Category c) noexcept {
  switch (c) {
    case Category::Background:
      return CoarseCategory::Background;
    case Category::Method:
      return CoarseCategory::Method;
    case Category::Objective:
    case Category::Result:
    case Category::Other:
      return CoarseCategory::Other;
  }
  return CoarseCategory::Other;
}

constexpr std::size_t index_of(Category c) noexcept { return static_cast<std::size_t>(c); }
constexpr std::size_t index_of(CoarseCategory c) noexcept { return static_cast<std::size_t>(c); }

std::string_view to_string(Category c) noexcept;
std::string_view to_string(CoarseCategory c) noexcept;

/// Case-insensitive; accepts the CSAbstruct spellings ("objective", "results").
std::optional<Category> parse_category(std::string_view name);
std::optional<CoarseCategory> parse_coarse(std::string_view name);

struct LabeledSentence {
  SentenceRecord sentence;
  Category category = Category::Other;
  CoarseCategory coarse = CoarseCategory::Other;
  double confidence = 1.0;

  static LabeledSentence make(SentenceRecord sentence, Category category,
                              double confidence = 1.0) {
    return LabeledSentence{std::move(sentence), category, coarsen(category), confidence};
  }
};

}  // namespace surveyforge
