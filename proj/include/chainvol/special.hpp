#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "chainvol/arith.hpp"
#include "chainvol/errors.hpp"

namespace chainvol {

namespace detail {

// Coefficients zeta(2n) / (n (2n+1)) of the Lobachevsky series, n = 1..K.
// K is chosen so the first omitted term is below 10^{-(digits10+4)} for
// |theta| <= pi/2, where consecutive terms shrink by at least (theta/pi)^2 <= 1/4.
template <class Real>
const std::vector<Real>& lobachevsky_coefficients() {
    static const std::vector<Real> coeffs = [] {
        const int digits = std::numeric_limits<Real>::digits10 + 4;
        const int terms = static_cast<int>(std::ceil(digits * std::log2(10.0) / 2.0)) + 2;
        std::vector<Real> c;
        c.reserve(terms);
        for (int n = 1; n <= terms; ++n)
            c.push_back(boost::math::zeta(Real(2 * n)) / Real(n * (2 * n + 1)));
        return c;
    }();
    return coeffs;
}

} // namespace detail

/// Lobachevsky function Lambda(theta) = -int_0^theta log|2 sin x| dx.
///
/// theta is reduced into (-pi/2, pi/2] using pi-periodicity and oddness, then
///   Lambda(x) = x - x log(2x) + sum_{n>=1} x (x/pi)^{2n} zeta(2n) / (n (2n+1)),
/// the term-wise integral of -log(2x) - log(sin x / x). For |x| <= pi/2 the
/// terms decay at least like 4^{-n} and zeta(2n) <= zeta(2), so the tail after
/// K terms is below (4/3) zeta(2) (pi/2) 4^{-(K+1)} / ((K+1)(2K+3)).
template <class Real = double>
Real lobachevsky(const Real& theta) {
    using std::abs;
    using std::floor;
    using std::log;
    const Real pi = pi_v<Real>();
    Real x = theta - pi * floor(theta / pi);  // [0, pi)
    if (x > pi / 2) x -= pi;                   // (-pi/2, pi/2]
    if (x == 0) return Real(0);
    const bool negative = x < 0;
    x = abs(x);

    const Real ratio = (x / pi) * (x / pi);
    Real power = ratio;
    Real series = 0;
    for (const Real& c : detail::lobachevsky_coefficients<Real>()) {
        series += c * power;
        power *= ratio;
    }
    const Real value = x - x * log(2 * x) + x * series;
    return negative ? -value : value;
}

template <class Real = double>
Real erfc(const Real& x) {
    return boost::math::erfc(x);
}

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_refinements = 2000;

    void validate() const {
        if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("quadrature tolerances must be positive");
        if (max_refinements < 1) throw DomainError("max_refinements must be at least 1");
    }
};

/// Gaussian envelope |f(w)| <= amplitude * exp(-decay w^2).
struct GaussianEnvelope {
    double amplitude = 1.0;
    double decay = 1.0;
};

struct QuadratureResult {
    std::complex<double> value;
    double error_bound = 0;
    int refinements = 0;
    double cutoff = 0;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

namespace detail {

// 15-point Kronrod rule and its embedded 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    std::complex<double> value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

inline Panel gauss_kronrod_panel(const ComplexIntegrand& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const std::complex<double> center = f(mid);
    std::complex<double> kronrod = kronrod_weights[7] * center;
    std::complex<double> gauss = gauss_weights[3] * center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kronrod_nodes[i];
        const std::complex<double> pair = f(mid - dx) + f(mid + dx);
        kronrod += kronrod_weights[i] * pair;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b]. The panel with the
/// largest error estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol |I|).
inline QuadratureResult integrate_interval(const ComplexIntegrand& f, double a, double b,
                                           const QuadratureSpec& spec) {
    spec.validate();
    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_panel(f, a, b));
    std::complex<double> total = panels.top().value;
    double error = panels.top().error;
    int refinements = 0;

    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (refinements >= spec.max_refinements)
            throw ConvergenceError("quadrature did not reach tolerance", total.real(), total.imag(), error);
        const detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const auto left = detail::gauss_kronrod_panel(f, worst.lo, mid);
        const auto right = detail::gauss_kronrod_panel(f, mid, worst.hi);
        panels.push(left);
        panels.push(right);
        ++refinements;

        // Re-sum from the panels rather than updating incrementally, so the
        // running total carries no accumulated cancellation.
        total = 0;
        error = 0;
        auto copy = panels;
        while (!copy.empty()) {
            total += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    }
    return {total, error, refinements, b};
}

/// Estimates a Gaussian envelope from samples of |f|.
inline GaussianEnvelope detect_envelope(const ComplexIntegrand& f) {
    double amplitude = 0;
    for (double w : {0.0, 0.25, 0.5, 1.0}) amplitude = std::max(amplitude, std::abs(f(w)));
    if (amplitude == 0) return {std::numeric_limits<double>::min(), 1.0};
    double decay = std::numeric_limits<double>::infinity();
    for (double w : {2.0, 3.0, 4.0}) {
        const double v = std::abs(f(w));
        const double rate = v > 0 ? -std::log(v / amplitude) / (w * w) : std::numeric_limits<double>::infinity();
        decay = std::min(decay, rate);
    }
    if (!(decay > 0)) throw DomainError("integrand does not decay like a Gaussian");
    if (!std::isfinite(decay)) decay = 1.0;
    return {amplitude, decay};
}

/// int_0^inf f(w) dw for integrands bounded by a Gaussian envelope.
/// The domain is cut at W = sqrt(max(1, -log(abs_tol/A))/lambda) + 1 and the
/// envelope tail beyond W is added to the error bound.
inline QuadratureResult integrate_halfline(const ComplexIntegrand& f, const QuadratureSpec& spec,
                                           const GaussianEnvelope& env) {
    spec.validate();
    if (!(env.amplitude > 0) || !(env.decay > 0)) throw DomainError("envelope must be positive");
    const double cutoff =
        std::sqrt(std::max(1.0, -std::log(spec.abs_tol / env.amplitude)) / env.decay) + 1.0;
    QuadratureResult r = integrate_interval(f, 0.0, cutoff, spec);
    r.error_bound += env.amplitude * std::exp(-env.decay * cutoff * cutoff) / (2 * env.decay * cutoff);
    r.cutoff = cutoff;
    return r;
}

inline QuadratureResult integrate_halfline(const ComplexIntegrand& f, const QuadratureSpec& spec) {
    return integrate_halfline(f, spec, detect_envelope(f));
}

} // namespace chainvol
