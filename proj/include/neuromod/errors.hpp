#ifndef NEUROMOD_ERRORS_HPP
#define NEUROMOD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace neuromod {

/// Non-finite activation handed to a transfer function or map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad numeric argument to an analysis routine (w21 = 0, n not a power of two, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or request content that fails a precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, double magnitude)
      : std::runtime_error("orbit diverged at step " + std::to_string(step) +
                           " (|state| = " + std::to_string(magnitude) + ")"),
        step_(step), magnitude_(magnitude) {}

  std::size_t step() const noexcept { return step_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  std::size_t step_;
  double magnitude_;
};

}  // namespace neuromod

#endif  // NEUROMOD_ERRORS_HPP
