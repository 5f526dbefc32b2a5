#pragma once

#include <stdexcept>
#include <string>

namespace freecover {

/// Malformed or inconsistent caller input (bad word text, rank mismatch, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on mathematical structure failed (e.g. a quotient that is
/// not invariant under the endomorphism being lifted).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured size guard refused the computation.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, int level_reached)
      : std::runtime_error(what), level_reached_(level_reached) {}
  int level_reached() const noexcept { return level_reached_; }

 private:
  int level_reached_;
};

/// Internal consistency failure; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace freecover
