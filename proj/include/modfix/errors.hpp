#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace modfix {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A vector does not match the grid (or another vector) it is used with.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// An argument is outside its allowed range (counts, tolerances, bounds).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value is non-finite or otherwise outside the numeric domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The operation needs a property the modular does not declare.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Expression text rejected by the parser. `offset` is the 0-based character
/// position of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluation failed (division by zero, square root of a negative
/// value, non-finite result). Carries the point index when the failure
/// happened during a pointwise mapping application.
class EvalError : public Error {
public:
    explicit EvalError(const std::string& message) : Error(message) {}

    EvalError(const std::string& message, std::size_t point_index)
        : Error(message + " (at point index " + std::to_string(point_index) + ")"),
          point_index_(point_index) {}

    std::optional<std::size_t> point_index() const noexcept { return point_index_; }

private:
    std::optional<std::size_t> point_index_;
};

}  // namespace modfix
