#ifndef MBGDT_ERROR_HPP_
#define MBGDT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mbgdt {

// Precondition violation on caller-supplied data or parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite loss, gradient or weights during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : std::runtime_error("diverged at iteration " + std::to_string(iteration) +
                           ": " + what),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

// Unknown key or unparsable value in an experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every trial of a repeated experiment failed, so there is nothing to
// aggregate. Individual trial failures are recorded, not thrown.
class ExperimentFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbgdt

#endif  // MBGDT_ERROR_HPP_
