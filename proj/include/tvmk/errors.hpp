#pragma once

#include <stdexcept>
#include <string>

namespace tvmk {

/// Incompatible matrix or block shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scalar or structural parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Triangular solve hit a zero or near-zero diagonal entry.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input that makes the requested operation meaningless (zero residual,
/// zero reference image, ...).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read, parsed or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver produced a non-finite iterate.
class NumericFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tvmk
