#pragma once

#include <stdexcept>
#include <string>

namespace wbmo {

/// Thrown when a caller breaks a documented precondition (negative weight,
/// exponent out of range, empty bank, ...).
class contract_violation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Thrown when an operation is asked for a configuration it does not handle
/// (e.g. exhaustive interval enumeration in two dimensions).
class unsupported_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Thrown when an iterative numerical procedure cannot reach its certified
/// postcondition (retry cap exceeded, non-convergent truncation).
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw contract_violation(message);
}

}  // namespace wbmo
