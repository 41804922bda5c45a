#pragma once

#include <stdexcept>
#include <string>

namespace dare {

// Base class for all errors raised by this library. Everything thrown on
// purpose derives from this, so callers can catch dare::Error at the CLI
// boundary and print one diagnostic line.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A field value cannot be expressed in the head alphabets (day 0, month 13,
// wildcard in a day field, ...).
struct OutOfAlphabetError : Error {
    using Error::Error;
};

// Inputs that are structurally wrong for the requested sequence format:
// wrong token count, a year supplied to a year-less format, malformed text.
struct FormatMismatchError : Error {
    using Error::Error;
};

// Tensor or distribution dimensions disagree with the model/head layout.
struct ShapeMismatchError : Error {
    using Error::Error;
};

// NaN or infinity showed up where a finite number is required.
struct NonFiniteError : Error {
    using Error::Error;
};

// Invalid configuration values (negative rates, warmup >= epochs, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Checkpoint file problems.
struct CheckpointError : Error {
    using Error::Error;
};
struct BadMagicError : CheckpointError {
    using CheckpointError::CheckpointError;
};
struct VersionMismatchError : CheckpointError {
    using CheckpointError::CheckpointError;
};
struct TruncatedError : CheckpointError {
    using CheckpointError::CheckpointError;
};

// A referenced file or directory does not exist (or cannot be decoded).
struct MissingFileError : Error {
    using Error::Error;
};

// Malformed CSV input.
struct BadCsvError : Error {
    using Error::Error;
};

// An operation that needs at least one element received none.
struct EmptyInputError : Error {
    using Error::Error;
};

// error_rate_reduction with a baseline of 100% accuracy.
struct DegenerateBaselineError : Error {
    using Error::Error;
};

// review_bounds with no readable records at all.
struct EmptyReadableSetError : Error {
    using Error::Error;
};

}  // namespace dare
