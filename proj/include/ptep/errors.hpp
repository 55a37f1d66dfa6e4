#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ptep {

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a profile or geometry breaks its invariants. Carries every
/// violation found, not only the first.
class ValidationError : public InvalidInput {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptep
