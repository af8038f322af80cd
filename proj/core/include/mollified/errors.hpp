#pragma once

#include <stdexcept>
#include <string>

namespace mollified {

/// Raised when a function is evaluated at (or numerically on top of) a pole.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical scheme cannot certify its own truncation or
/// quadrature error below the requested target.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mollified
