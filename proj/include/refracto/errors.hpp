#pragma once

#include <stdexcept>
#include <string>

namespace refracto {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violated a numeric precondition (range, sign, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// n_sample > n_prism: total internal reflection cannot occur.
class NoTotalReflectionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A computed boundary position falls outside the pixel array.
class PixelRangeError : public Error {
public:
    using Error::Error;
};

/// An input sequence is too short for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// No positive difference found inside the scan window.
class NoRisingEdgeError : public Error {
public:
    using Error::Error;
};

/// The first pixels match neither the Normal, VeryLow nor Empty signature.
class AmbiguousLevelError : public Error {
public:
    using Error::Error;
};

/// Fewer than two distinct abscissae in a least-squares fit.
class DegenerateFitError : public Error {
public:
    using Error::Error;
};

/// A calibration group is empty or has a single point.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A calibration routine was fed unusable frames (or none at all).
class CalibrationInputError : public Error {
public:
    using Error::Error;
};

/// Queried position lies outside every calibrated segment.
class CalibrationRangeError : public Error {
public:
    using Error::Error;
};

/// Detection fell below the acceptance threshold (light too weak).
class WeakSignalError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file content; the message names the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& path, int line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    int line() const { return line_; }

private:
    int line_;
};

} // namespace refracto
