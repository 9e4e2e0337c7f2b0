#pragma once

#include <stdexcept>
#include <string>

namespace hqoc {

// Bad input: schema, ranges, hypotheses of a construction. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulation grid cannot hold the state.
class GridOverflowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Configured memory cap or scale limit exceeded. CLI exit code 2.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hqoc
