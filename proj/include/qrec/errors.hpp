#pragma once

// Error hierarchy. ValidationError covers bad inputs (rejected before any
// computation), NumericalError covers algorithmic failures on inputs that
// passed validation. The CLI maps them to exit codes 2 and 3.

#include <stdexcept>
#include <string>

namespace qrec {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class NotHermitian : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotUnitTrace : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotPSD : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// recovery angle undefined at p = 1 (tan^-1(1/0))
class DegenerateDamping : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NoInitialEntanglement : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// post-selection trace below cutoff: no state delivered
class ZeroSuccess : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace qrec
