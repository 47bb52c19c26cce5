#pragma once

#include <stdexcept>
#include <string>

namespace diffspec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is not an odd prime in the supported range.
struct InvalidPrimeError : Error {
    using Error::Error;
};

/// Requested a square root of a quadratic nonresidue.
struct NonResidueError : Error {
    using Error::Error;
};

/// Multiplicative inverse of zero.
struct DivisionByZeroError : Error {
    using Error::Error;
};

/// Extension field or brute-force run would exceed the configured order cap.
struct CapExceededError : Error {
    using Error::Error;
};

/// An argument that must be nonzero was zero.
struct ZeroArgumentError : Error {
    using Error::Error;
};

/// Input outside the supported domain (p = 2, the degenerate (p,n) = (3,1), ...).
struct UnsupportedInputError : Error {
    using Error::Error;
};

/// Internal consistency failure. Any of these indicates a bug in this
/// library, never a property of the input.
struct InternalError : Error {
    using Error::Error;
};

/// An exact division left a remainder.
struct DivisibilityError : InternalError {
    using InternalError::InternalError;
};

/// A case analysis did not fire exactly once.
struct BranchError : InternalError {
    using InternalError::InternalError;
};

} // namespace diffspec
