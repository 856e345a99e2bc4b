#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array lengths that must agree do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A quantity is undefined for the given input (e.g. kappa = 0 fixed points).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The global phase of a state relative to a mode is undefined.
class UndefinedPhaseError : public Error {
 public:
  using Error::Error;
};

/// A zero-mode could not be built to tolerance.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// NaN or Inf appeared in the state during time evolution.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace qwalk
