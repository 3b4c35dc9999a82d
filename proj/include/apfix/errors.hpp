#pragma once

#include <stdexcept>
#include <string>

namespace apfix {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A model-level inequality required by the existence theory does not hold
/// (positive mean loss rate, positive delays, ...).
struct HypothesisViolation : Error {
  using Error::Error;
};

/// A coefficient function falls outside the class the analytic machinery
/// can handle (no usable decomposition for the oscillation bound, ...).
struct UnsupportedCoefficient : Error {
  using Error::Error;
};

/// The exponent pair (m, n) lies in a regime the method does not cover.
struct RegimeUnsupported : Error {
  using Error::Error;
};

/// An argument is outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// A grid function does not extend far enough into the past to evaluate
/// every delayed or lagged lookup.
struct InsufficientHistory : Error {
  using Error::Error;
};

/// Two grid functions that must share a lattice do not, or an evaluation
/// point lies outside a grid's domain.
struct GridError : Error {
  using Error::Error;
};

/// The initial bracket fails the ordering condition required by the
/// sandwich iteration.
struct SandwichViolation : Error {
  SandwichViolation(const std::string& what, double where, double defect)
      : Error(what), t(where), gap(defect) {}
  double t;    ///< grid point with the worst violation
  double gap;  ///< size of the violation there
};

}  // namespace apfix
