#pragma once

// Colored Jones invariant of the Whitehead chains W_{a,b,c,d}.
//
// Two independent evaluators live here:
//  * jones_at_root: closed formulas at t = e^{2 pi i/N}, expressed through
//    S_{n,k} = prod_{j=1}^n 2 sin^2((k+j)pi/N) / sin(j pi/N) and evaluated in the
//    log domain via the prefix table s_m = -sum_{j<=m} log(2 sin(j pi/N)).
//  * jones_generic: the tangle-product sum at an arbitrary t = e^h, in
//    ordinary complex arithmetic. Only usable away from the root of unity.
// limit_cross_check compares the two by extrapolating h -> 2 pi i/N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "chainvol/arith.hpp"
#include "chainvol/errors.hpp"

namespace chainvol {

struct ChainParams {
    int a = 0;  // twists; sign is handedness
    int b = 1;  // belts
    int c = 0;  // clasps
    int d = 0;  // mirror clasps

    void validate() const {
        if (b < 1) throw DomainError("Whitehead chain requires b >= 1");
        if (c < 0 || d < 0) throw DomainError("Whitehead chain requires c, d >= 0");
    }
    int clasps() const { return c + d; }
    /// Exponent 4a - c + d carried by chi_{N,n}.
    int chi_exponent() const { return 4 * a - c + d; }
    ChainParams mirror() const { return {-a, b, d, c}; }

    friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

inline std::string to_string(const ChainParams& p) {
    return "W_{" + std::to_string(p.a) + "," + std::to_string(p.b) + "," + std::to_string(p.c) + "," +
           std::to_string(p.d) + "}";
}

/// s[m] = -sum_{j=1}^m log(2 sin(j pi/N)), m = 0..N-1. Immutable once built.
template <class Real = double>
class SinePrefix {
public:
    explicit SinePrefix(int N) : N_(N) {
        using std::log;
        using std::sin;
        if (N < 1) throw DomainError("sine_prefix requires N >= 1");
        s_.resize(static_cast<std::size_t>(N));
        s_[0] = 0;
        CompensatedSum<Real> acc;
        const Real pi = pi_v<Real>();
        for (int j = 1; j < N; ++j) {
            // sin(j pi/N) = sin((N-j) pi/N); the smaller argument is more accurate.
            const int m = std::min(j, N - j);
            acc.add(-log(2 * sin(pi * Real(m) / Real(N))));
            s_[static_cast<std::size_t>(j)] = acc.value();
        }
    }

    int N() const { return N_; }
    const Real& operator[](int m) const { return s_[static_cast<std::size_t>(m)]; }
    const std::vector<Real>& values() const { return s_; }

private:
    int N_;
    std::vector<Real> s_;
};

template <class Real = double>
SinePrefix<Real> sine_prefix(int N) {
    return SinePrefix<Real>(N);
}

/// log S_{n,k} = 2(s[k] - s[k+n]) + s[n].
template <class Real>
Real log_S(int n, int k, const SinePrefix<Real>& p) {
    if (n < 0 || k < 0 || n + k > p.N() - 1)
        throw DomainError("log_S: need n, k >= 0 and n + k <= N - 1");
    return 2 * (p[k] - p[k + n]) + p[n];
}

/// log S~_N, the maximal term S_{floor(N/2), floor(N/4)}.
template <class Real>
Real log_S_max(const SinePrefix<Real>& p) {
    return log_S(p.N() / 2, p.N() / 4, p);
}

/// log sum_{k=0}^{N-1-n} S_{n,k}. All terms are positive.
template <class Real>
Real log_clasp_sum(int n, const SinePrefix<Real>& p) {
    using std::exp;
    using std::log;
    const int N = p.N();
    if (n < 0 || n > N - 1) throw DomainError("log_clasp_sum: need 0 <= n <= N - 1");
    const int kmax = N - 1 - n;
    // log S_{n,k} - s[n] = 2(s[k] - s[k+n]); factor s[n] out of the sum.
    Real top = neg_inf<Real>();
    for (int k = 0; k <= kmax; ++k) top = std::max<Real>(top, 2 * (p[k] - p[k + n]));
    CompensatedSum<Real> acc;
    for (int k = 0; k <= kmax; ++k) acc.add(exp(2 * (p[k] - p[k + n]) - top));
    return p[n] + top + log(acc.value());
}

/// chi_{N,n} = exp(n(n+1-N) pi i / (2N)).
template <class Real = double>
LogComplex<Real> chi(int N, int n) {
    if (n < 0 || n > N - 1) throw DomainError("chi: need 0 <= n <= N - 1");
    const std::int64_t num = static_cast<std::int64_t>(n) * (n + 1 - N);
    return {Real(0), pi_fraction<Real>(num, 2 * static_cast<std::int64_t>(N))};
}

/// Framing-dependent global phase phi_N.
template <class Real = double>
LogComplex<Real> phi(const ChainParams& params, int N) {
    const std::int64_t twist = static_cast<std::int64_t>(N - 1) * (params.c - params.d);
    if (params.clasps() == 1) return {Real(0), pi_fraction<Real>(twist, N)};
    return {Real(0), (twist % 2 == 0) ? Real(0) : pi_v<Real>()};
}

/// J_N(W_{a,b,c,d}) at t = e^{2 pi i/N}, using a prefix table for this N.
template <class Real>
LogComplex<Real> jones_at_root(const ChainParams& params, const SinePrefix<Real>& p) {
    using std::log;
    params.validate();
    const int N = p.N();
    const int e = params.chi_exponent();
    const int power = params.clasps();

    if (params.b >= 2) {
        if (N % 2 == 0) return LogComplex<Real>::zero();
        const int M = (N - 1) / 2;
        LogComplex<Real> value{Real(params.b) * log(Real(N)), Real(0)};
        value = lc_mul(value, lc_pow_int(chi<Real>(N, M), e));
        if (power > 0) value = lc_mul(value, lc_pow_int(LogComplex<Real>{log_clasp_sum(M, p), Real(0)}, power));
        return lc_mul(phi<Real>(params, N), value);
    }

    std::vector<LogComplex<Real>> terms;
    terms.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        LogComplex<Real> term{log(Real(2 * n + 1)), Real(0)};
        term = lc_mul(term, lc_pow_int(chi<Real>(N, n), e));
        if (power > 0) term = lc_mul(term, lc_pow_int(LogComplex<Real>{log_clasp_sum(n, p), Real(0)}, power));
        terms.push_back(term);
    }
    return lc_mul(phi<Real>(params, N), lc_sum(terms));
}

template <class Real = double>
LogComplex<Real> jones_at_root(const ChainParams& params, int N) {
    if (N < 1) throw DomainError("jones_at_root requires N >= 1");
    params.validate();
    if (params.b >= 2 && N % 2 == 0) return LogComplex<Real>::zero();
    return jones_at_root(params, SinePrefix<Real>(N));
}

/// Precision-dispatched evaluation; the result is rounded to double.
inline LogComplex<double> jones_at_root(const ChainParams& params, int N, Precision precision) {
    return with_precision(precision, [&](auto tag) {
        using Real = typename decltype(tag)::type;
        return to_double(jones_at_root<Real>(params, N));
    });
}

// ---------------------------------------------------------------------------
// Generic-t evaluation

/// t = e^h; fractional powers are t^x = e^{xh}.
struct EvaluationPoint {
    std::complex<double> h;

    explicit EvaluationPoint(std::complex<double> h_) : h(h_) {
        if (h == 0.0) throw DomainError("evaluation point requires h != 0");
    }
    std::complex<double> pow(double x) const { return std::exp(x * h); }

    /// h = 2 pi i (1 + eps) / N.
    static EvaluationPoint near_root(int N, double eps) {
        return EvaluationPoint(std::complex<double>(0.0, 2.0 * std::numbers::pi * (1.0 + eps) / N));
    }
};

namespace detail {

inline constexpr double vanishing_tol = 1e-12;

inline bool vanishes(std::complex<double> difference, double scale) {
    return std::abs(difference) <= vanishing_tol * scale;
}

inline std::complex<double> ipow(std::complex<double> z, int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    std::complex<double> r = 1.0;
    while (e > 0) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// Quantum integer [m] = (t^{m/2} - t^{-m/2}) / (t^{1/2} - t^{-1/2}).
inline std::complex<double> quantum_integer(int m, const EvaluationPoint& pt) {
    const auto up = pt.pow(0.5), down = pt.pow(-0.5);
    const auto den = up - down;
    if (detail::vanishes(den, std::abs(up) + std::abs(down)))
        throw DomainError("quantum_integer: t^{1/2} - t^{-1/2} vanishes");
    return (pt.pow(0.5 * m) - pt.pow(-0.5 * m)) / den;
}

namespace detail {

// Returns [m] and throws if it vanishes; `name` labels the factor in the error.
inline std::complex<double> nonzero_quantum_integer(int m, const EvaluationPoint& pt, const std::string& name) {
    const auto num_up = pt.pow(0.5 * m), num_down = pt.pow(-0.5 * m);
    if (vanishes(num_up - num_down, std::abs(num_up) + std::abs(num_down)))
        throw DomainError("denominator " + name + " vanishes at this evaluation point");
    return quantum_integer(m, pt);
}

} // namespace detail

struct TangleValues {
    std::complex<double> twist;     // T(n, t)
    std::complex<double> belt;      // B(n, t)
    std::complex<double> clasp;     // C(n, t)
    std::complex<double> clasp_mirror;  // C(n, t^{-1})
};

namespace detail {

inline std::complex<double> clasp_value(int n, int N, const EvaluationPoint& pt, bool framing) {
    const double prefactor_exponent =
        (framing ? 0.5 * (static_cast<double>(N) * N - 1) : 0.0) + 0.5 * N * (N - 1.0);
    std::complex<double> sum = 0.0;
    for (int k = 0; k <= N - 1 - n; ++k) {
        std::complex<double> term = pt.pow(-static_cast<double>(N) * (n + k));
        for (int j = 1; j <= n; ++j) {
            const auto den = 1.0 - pt.pow(j);
            if (vanishes(den, 1.0 + std::abs(pt.pow(j))))
                throw DomainError("denominator (1 - t^" + std::to_string(j) + ") vanishes at this evaluation point");
            term *= (1.0 - pt.pow(N - j - k)) * (1.0 - pt.pow(j + k)) / den;
        }
        sum += term;
    }
    return pt.pow(prefactor_exponent) * sum;
}

} // namespace detail

/// Scalar tangle functions on the V_{2n+1} block. `framing` adds t^{(N^2-1)/2} to C.
inline TangleValues tangle_values(int n, int N, const EvaluationPoint& pt, bool framing) {
    if (N < 1 || n < 0 || n > N - 1) throw DomainError("tangle_values: need 0 <= n <= N - 1");
    TangleValues v;
    v.twist = pt.pow(static_cast<double>(n) * (n + 1));
    const auto q = detail::nonzero_quantum_integer(2 * n + 1, pt, "[2n+1]");
    v.belt = quantum_integer(N * (2 * n + 1), pt) / q;
    v.clasp = detail::clasp_value(n, N, pt, framing);
    v.clasp_mirror = detail::clasp_value(n, N, EvaluationPoint(-pt.h), framing);
    return v;
}

/// sum_n ([2n+1]/[N]) T^a B^b C^c C(t^{-1})^d, framing iff c + d = 1.
inline std::complex<double> jones_generic(const ChainParams& params, int N, const EvaluationPoint& pt) {
    params.validate();
    if (N < 1) throw DomainError("jones_generic requires N >= 1");
    if (N == 1) return 1.0;
    {
        const auto up = pt.pow(0.5 * N), down = pt.pow(-0.5 * N);
        if (detail::vanishes(up - down, std::abs(up) + std::abs(down)))
            throw DomainError("[N] vanishes at this evaluation point; use jones_at_root at t = e^{2 pi i/N}");
    }
    const auto qN = quantum_integer(N, pt);
    const bool framing = params.clasps() == 1;
    std::complex<double> total = 0.0;
    for (int n = 0; n < N; ++n) {
        const TangleValues v = tangle_values(n, N, pt, framing);
        std::complex<double> term = quantum_integer(2 * n + 1, pt) / qN;
        term *= pt.pow(static_cast<double>(params.a) * n * (n + 1));
        term *= detail::ipow(v.belt, params.b);
        term *= detail::ipow(v.clasp, params.c);
        term *= detail::ipow(v.clasp_mirror, params.d);
        total += term;
    }
    return total;
}

struct CrossCheckReport {
    ChainParams params;
    int N = 0;
    std::complex<double> exact;          // jones_at_root
    std::complex<double> extrapolated;   // generic formula extrapolated to eps = 0
    std::vector<double> eps;
    std::vector<std::complex<double>> samples;
    std::vector<double> partial_deviations;  // using the first 1, 2, ... samples
    double deviation = 0;     // relative, or absolute when exact is zero
    bool absolute = false;
    bool converged = true;
};

/// Polynomial extrapolation to x = 0 through (x_i, y_i) (Neville).
inline std::complex<double> extrapolate_to_zero(const std::vector<double>& x,
                                                std::vector<std::complex<double>> y) {
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y.empty() ? std::complex<double>(0.0) : y[0];
}

/// Validates the root-of-unity formulas against the generic tangle sum evaluated
/// at h = 2 pi i (1 + eps)/N and extrapolated to eps -> 0.
inline CrossCheckReport limit_cross_check(const ChainParams& params, int N, const std::vector<double>& eps_sequence) {
    params.validate();
    if (N < 1 || N > 25) throw DomainError("limit_cross_check supports 1 <= N <= 25");
    if (eps_sequence.empty()) throw DomainError("limit_cross_check needs at least one eps");
    for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
        if (!(eps_sequence[i] > 0)) throw DomainError("eps values must be positive");
        if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1])) throw DomainError("eps values must decrease");
    }

    CrossCheckReport r;
    r.params = params;
    r.N = N;
    r.eps = eps_sequence;
    const auto root = jones_at_root<double>(params, N);
    const auto cart = lc_to_cartesian(root);
    r.exact = {cart.re, cart.im};
    r.absolute = root.is_zero();

    for (double e : eps_sequence) r.samples.push_back(jones_generic(params, N, EvaluationPoint::near_root(N, e)));

    auto deviation = [&](std::complex<double> v) {
        return r.absolute ? std::abs(v) : std::abs(v - r.exact) / std::abs(r.exact);
    };
    for (std::size_t m = 1; m <= r.samples.size(); ++m) {
        const std::vector<double> xs(r.eps.begin(), r.eps.begin() + static_cast<long>(m));
        const std::vector<std::complex<double>> ys(r.samples.begin(), r.samples.begin() + static_cast<long>(m));
        r.partial_deviations.push_back(deviation(extrapolate_to_zero(xs, ys)));
    }
    r.extrapolated = extrapolate_to_zero(r.eps, r.samples);
    r.deviation = r.partial_deviations.back();
    // Rounding noise floor: once below 1e-10 further decrease is not expected.
    for (std::size_t i = 1; i < r.partial_deviations.size(); ++i)
        if (r.partial_deviations[i] > r.partial_deviations[i - 1] && r.partial_deviations[i] > 1e-10)
            r.converged = false;
    return r;
}

} // namespace chainvol
