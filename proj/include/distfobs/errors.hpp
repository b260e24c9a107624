#pragma once

#include <stdexcept>
#include <string>

namespace distfobs {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: JSON syntax, unknown keys, wrong types.
struct ParseError : Error {
    using Error::Error;
};

// Well-formed but inconsistent input (dimension mismatches across a model,
// non-square A, bad tolerance values, invalid weights, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Two operands that must agree in shape don't.
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct SquareRequired : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidNode : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptySelection : ValidationError {
    using ValidationError::ValidationError;
};

// The communication graph is not strongly connected (no spanning tree from
// some root / model invalid for the distributed design).
struct NotStronglyConnected : ValidationError {
    using ValidationError::ValidationError;
};

// No leader set satisfies the feasibility conditions.
struct NoFeasibleLeaderSet : Error {
    using Error::Error;
};

// A decomposition invariant failed beyond tolerance, which indicates an
// invalid certificate or numerically hostile data.
struct ResidualTooLarge : Error {
    using Error::Error;
};

// A required structural decomposition does not exist (e.g. the naive
// baseline's span condition fails).
struct DecompositionFailed : Error {
    using Error::Error;
};

// Gain synthesis could not reach the requested spectral radius.
struct SynthesisFailed : Error {
    using Error::Error;
};

// Requested simulation mode is not applicable to the given model.
struct ModeUnsupported : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace distfobs
