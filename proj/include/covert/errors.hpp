#pragma once

#include <stdexcept>

namespace covert {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// P(x) > 0 on a point where Q(x) = 0 in a divergence that needs P << Q.
struct AbsoluteContinuityViolation : Error { using Error::Error; };
// Two distributions that must share an alphabet do not.
struct AlphabetMismatch : Error { using Error::Error; };
// Argument outside the mathematical domain of the operation.
struct DomainError : Error { using Error::Error; };
// An exact enumeration would exceed the configured atom/type-class cap.
struct CombinatorialBlowup : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };
// Standing channel assumptions (Q1 << Q0, P1 << P0, Q1 != Q0) violated.
struct AssumptionViolation : Error { using Error::Error; };
// The depressed cubic has a single real root; the trigonometric form does not apply.
struct ComplexRootRegime : Error { using Error::Error; };
struct InfeasibleBlocklength : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };
struct InfeasibleWeight : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct UnknownSuite : Error { using Error::Error; };

}  // namespace covert
