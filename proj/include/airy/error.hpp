#pragma once

#include <stdexcept>
#include <string>

namespace airy {

// Precondition violated by the caller (bad parameter, unsorted input, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No admissible point satisfies the constraints of an optimization problem.
class InfeasibleError : public NumericalError {
 public:
  InfeasibleError(const std::string& what, double best_distance)
      : NumericalError(what), best_distance_(best_distance) {}
  double best_distance() const noexcept { return best_distance_; }

 private:
  double best_distance_;
};

}  // namespace airy
