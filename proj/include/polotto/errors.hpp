#pragma once

#include <stdexcept>
#include <string>

namespace polotto {

// Error categories map onto CLI exit codes: validation -> 2,
// physics -> 3, numerical -> 4.
enum class ErrorCategory { validation, physics, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

// -- physics-domain errors: the requested operation is not defined for the
//    supplied physical inputs.

class PhysicsError : public Error {
 public:
  explicit PhysicsError(const std::string& what)
      : Error(ErrorCategory::physics, what) {}
};

class DomainError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class DivergentOccupationError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class RegimeError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class InfeasibleProtocolError : public PhysicsError {
 public:
  InfeasibleProtocolError(const std::string& what, double min_omega_sq,
                          double at_time)
      : PhysicsError(what), min_omega_sq_(min_omega_sq), at_time_(at_time) {}
  double min_omega_sq() const noexcept { return min_omega_sq_; }
  double at_time() const noexcept { return at_time_; }

 private:
  double min_omega_sq_;
  double at_time_;
};

class UnattainableFrequencyError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class DegenerateMapError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class ValidityError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

// -- numerical errors: the algorithm itself failed.

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

class ComplexRootError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSpectrumError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularWeightError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace polotto
