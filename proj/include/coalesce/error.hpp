#pragma once

#include <stdexcept>
#include <string>

namespace coalesce {

// Base of every failure raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& what) : Error("invalid_spec", what) {}
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double matrix_norm, long iterations)
      : Error("convergence_failure", what),
        matrix_norm_(matrix_norm),
        iterations_(iterations) {}
  double matrix_norm() const noexcept { return matrix_norm_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double matrix_norm_;
  long iterations_;
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error("configuration_error", what) {}
};

class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : Error("integration_failure", what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace coalesce
