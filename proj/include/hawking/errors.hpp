#pragma once

#include <stdexcept>
#include <string>

namespace hawking {

/// Argument outside the admissible parameter range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The profile integrator left the positive-radius region.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Induced metric degenerate, inadmissible graph, or unsupported surface path.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver (eigen-solver, Newton) failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  /// Solver-specific diagnostic (spectral gap estimate, last residual).
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Precondition of a variation formula is not met.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hawking
