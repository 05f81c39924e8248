// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace riscap {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix shape, element count, or index mismatch.
struct DimensionError : Error {
    using Error::Error;
};

// Scalar argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// A covariance matrix that must be positive definite is not.
struct SingularCovarianceError : Error {
    double eigenvalue;  // offending (smallest) eigenvalue
    SingularCovarianceError(const std::string& msg, double eig)
        : Error(msg + " (eigenvalue " + std::to_string(eig) + ")"), eigenvalue(eig) {}
};

// Eigenvalue spacing too small to evaluate a spectral formula, even after
// the tie-breaking perturbation.
struct DegenerateSpectrumError : Error {
    using Error::Error;
};

// An infinite series failed to converge within its term budget.
struct ConvergenceError : Error {
    double residual;  // estimated magnitude of the truncated remainder
    ConvergenceError(const std::string& msg, double res)
        : Error(msg + " (residual bound " + std::to_string(res) + ")"), residual(res) {}
};

// Input size exceeds an explicit combinatorial guard.
struct CombinatorialLimitError : Error {
    using Error::Error;
};

// A structural assumption of a formula does not hold for the given input.
struct AssumptionError : Error {
    using Error::Error;
};

// A classification routine could not match any expected pattern.
struct InconclusiveError : Error {
    using Error::Error;
};

// Malformed configuration file or option set.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace riscap
