#pragma once

// Log-domain complex numbers and compensated summation.
//
// A LogComplex stores a complex value as (log|z|, arg z). Magnitudes such as
// e^1200 are routine for the invariants in this library, so every large
// product and sum stays in this form until the caller asks for cartesian
// coordinates.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "chainvol/errors.hpp"

namespace chainvol {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

/// Requested significant decimal digits.
struct Precision {
    int digits = 16;

    constexpr Precision() = default;
    explicit Precision(int d) : digits(d) {
        if (d < 10) throw DomainError("precision must be at least 10 digits");
        if (d > 100) throw DomainError("precision above 100 digits is not supported");
    }

    /// Relative tolerance 10^{2-digits} used by the invariants.
    double tolerance() const { return std::pow(10.0, 2 - digits); }
};

/// Calls f(std::type_identity<Real>{}) with the narrowest real type that
/// carries the requested digits.
template <class F>
decltype(auto) with_precision(Precision p, F&& f) {
    if (p.digits <= 16) return std::forward<F>(f)(std::type_identity<double>{});
    if (p.digits <= 50) return std::forward<F>(f)(std::type_identity<Real50>{});
    return std::forward<F>(f)(std::type_identity<Real100>{});
}

template <class Real>
Real pi_v() {
    return boost::math::constants::pi<Real>();
}

template <class Real>
Real neg_inf() {
    return -std::numeric_limits<Real>::infinity();
}

/// Maps an angle into (-pi, pi].
template <class Real>
Real normalize_phase(const Real& x) {
    using std::fmod;
    const Real two_pi = 2 * pi_v<Real>();
    if (x > -pi_v<Real>() && x <= pi_v<Real>()) return x;
    Real r = fmod(x + pi_v<Real>(), two_pi);
    if (r <= 0) r += two_pi;
    return r - pi_v<Real>();
}

/// Exact phase num*pi/den, reduced with integer arithmetic before the
/// multiplication by pi so large numerators lose nothing.
template <class Real>
Real pi_fraction(std::int64_t num, std::int64_t den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t period = 2 * den;
    std::int64_t r = num % period;
    if (r <= -den) r += period;
    if (r > den) r -= period;
    return pi_v<Real>() * Real(r) / Real(den);
}

template <class Real>
struct Cartesian {
    Real re;
    Real im;
};

template <class Real = double>
struct LogComplex {
    Real log_mag = 0;  // -inf encodes exact zero
    Real phase = 0;    // in (-pi, pi]

    static LogComplex zero() { return {neg_inf<Real>(), Real(0)}; }
    static LogComplex one() { return {Real(0), Real(0)}; }
    static LogComplex polar(const Real& log_mag, const Real& phase) {
        return {log_mag, normalize_phase(phase)};
    }
    /// log(|x|) with phase 0 or pi.
    static LogComplex from_real(const Real& x) {
        using std::abs;
        using std::log;
        if (x == 0) return zero();
        return {log(abs(x)), x < 0 ? pi_v<Real>() : Real(0)};
    }

    bool is_zero() const { return log_mag == neg_inf<Real>(); }

    friend bool operator==(const LogComplex& x, const LogComplex& y) {
        if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
        return x.log_mag == y.log_mag && x.phase == y.phase;
    }
};

template <class Real>
LogComplex<Real> lc_mul(const LogComplex<Real>& x, const LogComplex<Real>& y) {
    if (x.is_zero() || y.is_zero()) return LogComplex<Real>::zero();
    return {x.log_mag + y.log_mag, normalize_phase(x.phase + y.phase)};
}

template <class Real>
LogComplex<Real> lc_pow_int(const LogComplex<Real>& x, std::int64_t e) {
    if (e == 0) return LogComplex<Real>::one();
    if (x.is_zero()) {
        if (e < 0) throw DomainError("lc_pow_int: zero raised to a negative power");
        return LogComplex<Real>::zero();
    }
    return {Real(e) * x.log_mag, normalize_phase(Real(e) * x.phase)};
}

/// Neumaier-compensated accumulator. Order-sensitive but deterministic.
template <class Real>
class CompensatedSum {
public:
    void add(const Real& v) {
        using std::abs;
        Real t = sum_ + v;
        if (abs(sum_) >= abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

/// Sum of log-domain terms in the given order.
template <class Real>
LogComplex<Real> lc_sum(std::span<const LogComplex<Real>> terms) {
    using std::atan2;
    using std::cos;
    using std::exp;
    using std::hypot;
    using std::log;
    using std::sin;

    Real top = neg_inf<Real>();
    for (const auto& t : terms)
        if (t.log_mag > top) top = t.log_mag;
    if (top == neg_inf<Real>()) return LogComplex<Real>::zero();

    CompensatedSum<Real> re, im;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        const Real scale = exp(t.log_mag - top);
        re.add(scale * cos(t.phase));
        im.add(scale * sin(t.phase));
    }
    const Real x = re.value();
    const Real y = im.value();
    if (x == 0 && y == 0) return LogComplex<Real>::zero();
    return {top + log(hypot(x, y)), normalize_phase(atan2(y, x))};
}

template <class Real>
LogComplex<Real> lc_sum(const std::vector<LogComplex<Real>>& terms) {
    return lc_sum(std::span<const LogComplex<Real>>(terms));
}

/// log of a sum of positive reals given by their logs.
template <class Real>
Real log_sum_exp(std::span<const Real> logs) {
    using std::exp;
    using std::log;
    Real top = neg_inf<Real>();
    for (const auto& v : logs)
        if (v > top) top = v;
    if (top == neg_inf<Real>()) return top;
    CompensatedSum<Real> acc;
    for (const auto& v : logs) acc.add(exp(v - top));
    return top + log(acc.value());
}

template <class Real>
Cartesian<Real> lc_to_cartesian(const LogComplex<Real>& x) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    if (x.is_zero()) return {Real(0), Real(0)};
    if (x.log_mag >= log(std::numeric_limits<Real>::max()))
        throw RangeError("lc_to_cartesian: magnitude exceeds the representable range");
    const Real m = exp(x.log_mag);
    return {m * cos(x.phase), m * sin(x.phase)};
}

/// Cartesian value if representable.
template <class Real>
bool lc_representable(const LogComplex<Real>& x) {
    using std::log;
    return x.is_zero() || x.log_mag < log(std::numeric_limits<Real>::max());
}

template <class Real>
LogComplex<double> to_double(const LogComplex<Real>& x) {
    if (x.is_zero()) return LogComplex<double>::zero();
    return {static_cast<double>(x.log_mag), static_cast<double>(x.phase)};
}

} // namespace chainvol
