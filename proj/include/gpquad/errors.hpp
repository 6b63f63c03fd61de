#pragma once

#include <stdexcept>
#include <string>

namespace gpquad {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter violates a precondition (bad dimension,
/// non-positive variance, out-of-range rule parameter, ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// A requested computation exceeds a configured budget (e.g. tensor-product
/// grids growing past the point cap).
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// Base class for failures of the numerics themselves.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Covariance matrix could not be factorized even after jitter.
class SingularCovarianceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Kernel Gram matrix is not positive definite (duplicate points or
/// pathological lengthscales).
class IllConditionedKernelError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Innovation covariance in the measurement update is not positive definite.
class SingularInnovationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A user-supplied function returned a non-finite value.
class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Sample ensemble too small or collapsed (singular mean-square-error matrix).
class DegenerateEnsembleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace gpquad
