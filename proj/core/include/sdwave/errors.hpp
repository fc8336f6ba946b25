#pragma once

#include <stdexcept>
#include <string>

namespace sdwave {

/// Numerical failure inside a module (step underflow, budget exhausted,
/// smallness conditions that cannot be met). Carries the time of failure when
/// one is meaningful.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time_(time) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A certificate was requested for a profile whose hypotheses do not verify.
class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdwave
