#pragma once

#include <stdexcept>
#include <string>

namespace specrad {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension chain has too few entries to describe an ensemble.
class LengthError : public Error {
public:
    using Error::Error;
};

// Dimension chain violates the minimality assumption (first = last = min).
class ShapeError : public Error {
public:
    using Error::Error;
};

// Index argument outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Scalar argument outside the domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative method failed to converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Matrix larger than the configured cap for a dense path.
class SizeError : public Error {
public:
    using Error::Error;
};

// Power iteration collapsed without an exact zero image.
class ZeroError : public Error {
public:
    using Error::Error;
};

// Requested simulation exceeds the draw budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Input data failed validation (NaN, too few points, malformed rows).
class DataError : public Error {
public:
    using Error::Error;
};

// Declared regime contradicts the ensemble's size parameter.
class GuardError : public Error {
public:
    using Error::Error;
};

// Structured document could not be parsed against the schema.
class ParseError : public Error {
public:
    using Error::Error;
};

// Matrix product produced non-finite entries.
class OverflowError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace specrad
