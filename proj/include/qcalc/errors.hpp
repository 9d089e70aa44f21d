#pragma once

#include <stdexcept>
#include <string>

namespace qcalc {

// Error taxonomy shared by every module. The CLI maps these onto exit codes.

/// Malformed or non-finite input.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point (spectrum, stencil, series argument) outside the admissible domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Contour or surface construction failed, or a spectrum touches/escapes it.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inversion of the zero quaternion.
class SingularElement : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A function does not satisfy the symmetry its type promises.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Result could not be certified to the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double measured)
        : std::runtime_error(what), measured_(measured) {}
    double measured() const noexcept { return measured_; }

private:
    double measured_;
};

/// Failure inside a dense eigen/SVD routine or an unresolvable degeneracy.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcalc
