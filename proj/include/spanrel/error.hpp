#pragma once

#include <stdexcept>
#include <string>

namespace spanrel {

/// Raised for malformed or inconsistent input data (bad records, unknown
/// labels, broken offsets). The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation cannot produce a result for otherwise valid
/// input (singular design, statistic undefined under every resample).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spanrel
