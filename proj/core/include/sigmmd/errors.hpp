#pragma once

#include <stdexcept>
#include <string>

namespace sigmmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A path violates its invariants (grid not increasing, non-finite entries, ...).
class InvalidPathError : public Error {
public:
    using Error::Error;
};

/// Requested tensor size does not fit in addressable memory.
class CapacityError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// An estimator needs more samples than were supplied.
class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

/// Bad parameter or configuration value.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (zero variance, non-finite result, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace sigmmd
