#pragma once

#include <stdexcept>
#include <string>

namespace thaad {

/// Base class for all errors raised by the library. Anything derived from it
/// signals bad input or configuration; internal logic errors use the standard
/// exception types directly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or out-of-domain values passed to an operation.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A series is too short for the requested window.
class InsufficientHistoryError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Input whose statistics make the operation meaningless (e.g. a negative
/// window mean for a ratio).
class DegenerateInputError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Violations of the numeric code format or its capacity limits.
class EncodingError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// A match query that does not fit the index it is aimed at.
class InvalidQueryError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Bad configuration values or unknown configuration keys.
class ConfigError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// File content that cannot be parsed. Carries the 1-based line number when
/// the failing line is known (0 otherwise).
class ParseError : public InvalidInputError {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : InvalidInputError(line ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace thaad
