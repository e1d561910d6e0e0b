#pragma once

#include <stdexcept>
#include <string>

namespace adazero {

/// Raised when a caller breaks an operation's precondition (shape mismatch,
/// out-of-range argument, stepping a finished episode, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when training produces a non-finite loss, gradient or parameter.
class TrainingHalted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* what) {
  if (!condition) throw ContractViolation(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ContractViolation(what);
}

}  // namespace adazero
