#pragma once

#include <stdexcept>
#include <string>

namespace sphericity {

/// Argument outside the domain of an operation (radius out of range, zero
/// tangent, antipodal log, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A model point or tangent does not satisfy its coordinate-model constraint.
class ConstraintViolation : public DomainError {
public:
    using DomainError::DomainError;
};

/// A curvature window straddles a corner of a non-regular curve.
class CornerError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Support-function curve rejected because its radius of curvature leaves
/// (0, 1/k0] at `theta`.
class RejectionError : public DomainError {
public:
    RejectionError(const std::string& what, double theta)
        : DomainError(what), theta_(theta) {}
    double theta() const noexcept { return theta_; }

private:
    double theta_;
};

/// The geometric hypothesis of a bound is not met by the input, so the bound
/// cannot be judged.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The closure solver of the frame-ODE generator did not converge.
class NonClosureError : public std::runtime_error {
public:
    NonClosureError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Malformed run configuration; the message carries the location.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sphericity
