#pragma once

#include <stdexcept>
#include <string>

namespace kdvls {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violations of a parameter or regime contract. CLI maps these to exit code 2.
struct DomainError : Error {
    using Error::Error;
};

struct InvalidCoefficients : DomainError {
    using DomainError::DomainError;
};

struct InvalidFamily : DomainError {
    using DomainError::DomainError;
};

struct WrongRegime : DomainError {
    using DomainError::DomainError;
};

struct OutOfDomain : DomainError {
    using DomainError::DomainError;
};

struct NoBifurcations : DomainError {
    using DomainError::DomainError;
};

struct ShapeError : DomainError {
    using DomainError::DomainError;
};

struct ConfigError : DomainError {
    using DomainError::DomainError;
};

/// Failures of an iterative or dense numerical procedure. CLI maps these to exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

struct NumericalFailure : NumericalError {
    explicit NumericalFailure(const std::string& what, int info = 0)
        : NumericalError(what), info(info) {}
    int info;
};

struct NoConvergence : NumericalError {
    NoConvergence(const std::string& what, double last_residual)
        : NumericalError(what), last_residual(last_residual) {}
    double last_residual;
};

} // namespace kdvls
