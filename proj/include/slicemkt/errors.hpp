#pragma once

#include <stdexcept>
#include <string>

namespace slicemkt {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Offered load reaches or exceeds the service capacity.
struct UnstableLoad : Error {
    using Error::Error;
};

/// An inner delay denominator came out nonpositive; indicates a caller bug,
/// since stability already implies it is positive.
struct DegenerateDenominator : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. T <= 0).
struct DomainError : Error {
    using Error::Error;
};

/// Model parameters violate their documented invariants.
struct InvalidParams : Error {
    using Error::Error;
};

/// Simulation configuration violates its documented invariants.
struct InvalidConfig : Error {
    using Error::Error;
};

/// An iterative solver did not reach its tolerance; the message carries the
/// iteration trace tail so the caller can diagnose damping/tolerance issues.
struct NoConvergence : Error {
    using Error::Error;
};

/// Numeric refinement failed to reproduce or improve the coarse optimum.
struct OptimizerFailure : Error {
    using Error::Error;
};

/// No non-trivial Nash equilibrium passed verification.
struct NoEquilibriumFound : Error {
    using Error::Error;
};

}  // namespace slicemkt
