#pragma once

#include <stdexcept>
#include <string>

namespace evt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A distribution or operation parameter is outside its admissible range.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a mathematical function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Errors that signal a failed numerical computation rather than bad input.
class ComputationError : public Error {
public:
    using Error::Error;
};

class BracketFailure : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class QuadratureFailure : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// An improper integral (tail moment) does not converge.
class DivergenceError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class NonpositiveValue : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class DegenerateError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// A finite endpoint was required but the distribution has none.
class EndpointError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class MissingDensity : public ComputationError {
public:
    using ComputationError::ComputationError;
};

}  // namespace evt
