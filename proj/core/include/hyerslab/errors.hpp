#pragma once

#include <stdexcept>
#include <string>

namespace hyerslab {

// Raised for arguments outside an operation's domain (non-finite input,
// mismatched dimensions, parameters out of range).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when the argument 3^n x of the direct method would exceed the cap.
class IterationOverflow : public std::runtime_error {
 public:
  IterationOverflow(const std::string& what, int last_safe_n)
      : std::runtime_error(what), last_safe_n_(last_safe_n) {}

  /// Largest n whose argument stayed within the cap (-1 if even n = 0 failed).
  int last_safe_n() const noexcept { return last_safe_n_; }

 private:
  int last_safe_n_;
};

class DivergentSeries : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A test function in verification mode left its declared perturbation budget.
class BudgetViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyerslab
