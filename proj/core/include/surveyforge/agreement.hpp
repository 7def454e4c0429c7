#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace surveyforge::eval {

/// items x categories matrix of rating counts; every row sums to the same
/// number of raters.
class AgreementTable {
 public:
  /// Throws InvalidArgument on ragged rows, negative counts or unequal row
  /// sums.
  explicit AgreementTable(std::vector<std::vector<int>> counts);

  /// Builds counts from one label list per item; categories are the sorted
  /// distinct labels.
  static AgreementTable from_ratings(std::span<const std::vector<std::string>> ratings);

  std::size_t items() const noexcept { return counts_.size(); }
  std::size_t categories() const noexcept { return counts_.empty() ? 0 : counts_.front().size(); }
  int raters_per_item() const noexcept { return raters_; }
  const std::vector<std::vector<int>>& counts() const noexcept { return counts_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::vector<int>> counts_;
  std::vector<std::string> labels_;
  int raters_ = 0;
};

/// Fleiss' kappa (P_bar - Pe_bar) / (1 - Pe_bar); 1.0 when every rating
/// falls in one category. Needs at least 2 items and 2 raters per item.
double fleiss_kappa(const AgreementTable& table);

}  // namespace surveyforge::eval
