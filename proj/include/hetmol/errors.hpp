#pragma once

#include <stdexcept>
#include <string>

namespace hetmol {

// Raised when caller-supplied parameters violate a precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a function is evaluated outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A solver or integrator could not meet its target. `reached` is the last
// accepted time (or iteration index for non-temporal solvers).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double reached)
      : std::runtime_error(what), reached_(reached) {}

  double reached() const { return reached_; }

 private:
  double reached_;
};

// A file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetmol
