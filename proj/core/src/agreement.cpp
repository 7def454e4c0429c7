#include "surveyforge/agreement.hpp"

#include <algorithm>
#include <map>

#include "surveyforge/errors.hpp"

namespace surveyforge::eval {

AgreementTable::AgreementTable(std::vector<std::vector<int>> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) return;
  const std::size_t k = counts_.front().size();
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto& row = counts_[i];
    if (row.size() != k) throw InvalidArgument("agreement table rows differ in width");
    int sum = 0;
    for (int c : row) {
      if (c < 0) throw InvalidArgument("agreement table has a negative count");
      sum += c;
    }
    if (i == 0) {
      raters_ = sum;
    } else if (sum != raters_) {
      throw InvalidArgument("agreement table row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) + ", expected " + std::to_string(raters_));
    }
  }
  for (std::size_t j = 0; j < k; ++j) labels_.push_back(std::to_string(j));
}

AgreementTable AgreementTable::from_ratings(std::span<const std::vector<std::string>> ratings) {
  std::map<std::string, std::size_t> index;
  for (const auto& item : ratings) {
    for (const auto& r : item) index.emplace(r, 0);
  }
  std::vector<std::string> labels;
  for (auto& [label, slot] : index) {
    slot = labels.size();
    labels.push_back(label);
  }
  std::vector<std::vector<int>> counts;
  for (const auto& item : ratings) {
    std::vector<int> row(labels.size(), 0);
    for (const auto& r : item) ++row[index.at(r)];
    counts.push_back(std::move(row));
  }
  AgreementTable table(std::move(counts));
  table.labels_ = std::move(labels);
  return table;
}

double fleiss_kappa(const AgreementTable& table) {
  const std::size_t n_items = table.items();
  const int raters = table.raters_per_item();
  if (n_items < 2) throw InvalidArgument("fleiss_kappa: need at least 2 items");
  if (raters < 2) throw InvalidArgument("fleiss_kappa: need at least 2 raters per item");

  const double n = static_cast<double>(raters);
  const std::size_t k = table.categories();
  std::vector<double> column(k, 0.0);
  double p_bar = 0.0;
  for (const auto& row : table.counts()) {
    double sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sq += static_cast<double>(row[j]) * row[j];
      column[j] += row[j];
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= static_cast<double>(n_items);
  double pe = 0.0;
  for (double c : column) {
    const double p = c / (static_cast<double>(n_items) * n);
    pe += p * p;
  }
  if (pe >= 1.0) return 1.0;
  return (p_bar - pe) / (1.0 - pe);
}

}  // namespace surveyforge::eval
