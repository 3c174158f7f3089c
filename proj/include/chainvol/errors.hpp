#pragma once

#include <stdexcept>
#include <string>

namespace chainvol {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Value exists but cannot be represented in the requested form.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Parameter combination the asymptotic theory does not cover.
class UnsupportedParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of refinements. Carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate_re, double estimate_im, double error_bound)
        : std::runtime_error(what), estimate_re_(estimate_re), estimate_im_(estimate_im),
          error_bound_(error_bound) {}

    double estimate_re() const noexcept { return estimate_re_; }
    double estimate_im() const noexcept { return estimate_im_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_re_;
    double estimate_im_;
    double error_bound_;
};

} // namespace chainvol
