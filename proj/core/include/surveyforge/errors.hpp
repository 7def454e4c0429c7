#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace surveyforge {

/// Raised when a caller violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a metric is undefined for the given input (e.g. an empty summary).
class UndefinedInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed corpus, model or config files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Power iteration hit its iteration cap before the residual dropped below
/// tolerance. Carries the last iterate so callers can still inspect it.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(std::vector<double> last_iterate, double residual,
                     std::size_t iterations)
      : std::runtime_error("power iteration did not converge after " +
                           std::to_string(iterations) +
                           " iterations (residual " + std::to_string(residual) +
                           ")"),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
  std::size_t iterations_;
};

}  // namespace surveyforge
