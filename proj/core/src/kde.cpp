#include "surveyforge/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "surveyforge/errors.hpp"

namespace surveyforge::eval {
namespace {

// Linear-interpolation quantile (type 7), data must be sorted.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgument("silverman_bandwidth: need at least 2 values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) {
    throw InvalidArgument("silverman_bandwidth: values have zero variance; pass a bandwidth");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

double gaussian_kde(std::span<const double> values, double bandwidth, double x) {
  const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (double v : values) {
    const double z = (x - v) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return norm * sum;
}

std::vector<DensityPoint> kde_export(std::span<const double> values, std::optional<double> bandwidth,
                                     std::size_t grid_size) {
  if (values.empty()) throw InvalidArgument("kde_export: no values");
  if (grid_size < 2) throw InvalidArgument("kde_export: grid_size must be >= 2");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("kde_export: bandwidth must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  std::vector<DensityPoint> curve(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = i + 1 == grid_size ? hi : lo + step * static_cast<double>(i);
    curve[i] = {x, gaussian_kde(values, h, x)};
  }
  return curve;
}

double trapezoid_integral(std::span<const DensityPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve[i].density + curve[i - 1].density) * (curve[i].x - curve[i - 1].x);
  }
  return area;
}

}  // namespace surveyforge::eval
