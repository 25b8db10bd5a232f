#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bussgang {

// An input outside the mathematical domain of an operation (nonpositive sigma,
// zero signal power, ...). `quantity()` names the offending value so callers
// can produce machine-parsable diagnostics.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string quantity, const std::string& message)
      : std::runtime_error(message), quantity_(std::move(quantity)) {}

  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::string quantity_;
};

// Adaptive quadrature exhausted its subdivision budget before reaching the
// requested tolerance. Carries the best estimate and its error bound.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, double best_estimate, double error_bound)
      : std::runtime_error(message), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

}  // namespace bussgang
