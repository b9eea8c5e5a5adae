#pragma once

#include <stdexcept>
#include <string>

namespace degen {

// Evaluation produced NaN/Inf, or an operation was handed bad input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration where a model formula divides by ~0 (e.g. X on the light cone).
class SingularConfigurationError : public std::runtime_error {
 public:
  SingularConfigurationError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

// Second-class matrix not invertible at the requested point.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double det_estimate)
      : std::runtime_error(what), det_(det_estimate) {}
  double det_estimate() const { return det_; }

 private:
  double det_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace degen
