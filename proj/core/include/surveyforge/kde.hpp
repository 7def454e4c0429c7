#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace surveyforge::eval {

struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
};

/// 0.9 * min(sd, IQR / 1.34) * n^(-1/5); sd alone when the IQR is zero.
/// Throws InvalidArgument for fewer than 2 values or zero variance.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian kernel density evaluated at x.
double gaussian_kde(std::span<const double> values, double bandwidth, double x);

/// Density on `grid_size` evenly spaced points over [min - 3h, max + 3h].
/// The bandwidth defaults to Silverman's rule.
std::vector<DensityPoint> kde_export(std::span<const double> values,
                                     std::optional<double> bandwidth = std::nullopt,
                                     std::size_t grid_size = 512);

/// Trapezoidal integral of a density curve.
double trapezoid_integral(std::span<const DensityPoint> curve);

}  // namespace surveyforge::eval
