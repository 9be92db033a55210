#pragma once

#include <stdexcept>
#include <string>

namespace superadd {

/// Argument outside the mathematical domain of an operation (angle out of
/// range, probability outside [0,1], mismatched dimensions).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a set of vectors is too close to linearly dependent to be
/// orthonormalized.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string &what, double smallest_eigenvalue)
        : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}

    double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

/// A measurement does not resolve the identity on the span of the states it
/// is applied to.
class CompletenessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bisection endpoints do not straddle a sign change.
class BracketingError : public std::runtime_error {
public:
    BracketingError(const std::string &what, double value_lo, double value_hi)
        : std::runtime_error(what), value_lo_(value_lo), value_hi_(value_hi) {}

    double value_lo() const noexcept { return value_lo_; }
    double value_hi() const noexcept { return value_hi_; }

private:
    double value_lo_;
    double value_hi_;
};

} // namespace superadd
