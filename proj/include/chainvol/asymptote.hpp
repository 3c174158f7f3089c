#pragma once

// Predicted asymptotics of J_N(W_{a,b,c,d}) at t = e^{2 pi i/N}:
//   J_N ~ exp{((Vol + i CS) N + D log N + E) / (2 pi)}
// and the finer statements in terms of the exact maximal term S~_N:
//   b = 1:  J_N ~ Q_inf N^{(c+d+3)/2} S~_N^{c+d} e^{i CS N/(2 pi)}
//   b >= 2, N odd:  J_N ~ 2^{-(c+d)/2} e^{(4a+3c-3d) pi i/4} N^{(c+d+2b)/2} S~_N^{c+d} e^{i CS N/(2 pi)}

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chainvol/arith.hpp"
#include "chainvol/errors.hpp"
#include "chainvol/invariant.hpp"
#include "chainvol/special.hpp"

namespace chainvol {

/// Sign convention for Re E when b >= 2. `negative` (-2 pi (c+d) log 2) agrees
/// with the b >= 2 prefactor 2^{-(c+d)/2}; `positive` is the alternative
/// +2 pi (c+d) log 2, kept for comparison.
enum class ESign { negative, positive };

inline const char* to_string(ESign s) { return s == ESign::negative ? "negative" : "positive"; }

template <class Real = double>
Real volume(const ChainParams& params) {
    return Real(8 * params.clasps()) * lobachevsky<Real>(pi_v<Real>() / 4);
}

/// CS in units of pi^2/4: CS = cs_quarter_pi2(params) * pi^2 / 4.
inline int cs_quarter_pi2(const ChainParams& p) {
    return p.clasps() == 1 ? -4 * p.a + p.c - p.d : -4 * p.a - 7 * p.c + 7 * p.d;
}

inline double chern_simons(const ChainParams& params) {
    return cs_quarter_pi2(params) * std::numbers::pi * std::numbers::pi / 4.0;
}

/// Phase CS N / (2 pi) = k pi N / 8, reduced exactly.
template <class Real = double>
Real cs_phase(const ChainParams& params, int N) {
    return pi_fraction<Real>(static_cast<std::int64_t>(cs_quarter_pi2(params)) * N, 8);
}

struct GrowthCoefficients {
    double d_coeff = 0;
    bool integral_defined = false;  // E given by Q_inf rather than a closed form
    std::optional<std::complex<double>> e_term;
    ESign sign = ESign::negative;
};

inline GrowthCoefficients growth_coefficients(const ChainParams& params, ESign sign = ESign::negative) {
    params.validate();
    constexpr double pi = std::numbers::pi;
    GrowthCoefficients g;
    g.sign = sign;
    if (params.b == 1) {
        if (params.clasps() == 0 && params.a == 0) {
            // J_N = N^2 exactly.
            g.d_coeff = 4 * pi;
            g.e_term = std::complex<double>(0.0, 0.0);
            return g;
        }
        g.d_coeff = 3 * pi;
        g.integral_defined = true;
        return g;
    }
    g.d_coeff = 2 * pi * params.b;
    const double re = (sign == ESign::negative ? -1.0 : 1.0) * 2 * pi * params.clasps() * std::log(2.0);
    const double im = (4 * params.a + 3 * params.c - 3 * params.d) / 4.0 * 2 * pi * pi;
    g.e_term = std::complex<double>(re, im);
    return g;
}

namespace detail {

inline void require_q_infinity_params(const ChainParams& p) {
    p.validate();
    if (p.b != 1) throw UnsupportedParameters("Q_inf is defined for b = 1 only");
    if (p.clasps() == 0) throw UnsupportedParameters("Q_inf needs c + d >= 1; the c + d = 0 integrand does not decay");
}

inline std::complex<double> psi(const ChainParams& p) {
    return std::polar(1.0, pi_fraction<double>(4 * p.a + 3 * p.c - 3 * p.d, 4));
}

} // namespace detail

/// Q_inf = lim Q_N as a Gaussian integral:
///   psi 2^{-(c+d)/2} int_R exp(-pi (c+d - (4a-c+d) i) w^2 / 2) dw,
/// with psi = exp((4a+3c-3d) pi i/4). The z_j directions of the
/// (c+d+1)-dimensional form integrate to 2^{-1/2} each.
inline std::complex<double> q_infinity(const ChainParams& params, const QuadratureSpec& spec = {}) {
    detail::require_q_infinity_params(params);
    const double m = params.clasps();
    const std::complex<double> coeff(m, -static_cast<double>(params.chi_exponent()));
    const double pi = std::numbers::pi;
    const auto integrand = [=](double w) { return std::exp(-pi * coeff * (w * w / 2)); };
    const auto r = integrate_halfline(integrand, spec, GaussianEnvelope{1.0, pi * m / 2});
    return detail::psi(params) * std::pow(2.0, -m / 2) * 2.0 * r.value;
}

/// psi 2^{-(c+d)/2} sqrt(2 / (c+d - (4a-c+d) i)), principal root.
inline std::complex<double> q_infinity_closed_form(const ChainParams& params) {
    detail::require_q_infinity_params(params);
    const double m = params.clasps();
    const std::complex<double> coeff(m, -static_cast<double>(params.chi_exponent()));
    return detail::psi(params) * std::pow(2.0, -m / 2) * std::sqrt(2.0 / coeff);
}

/// The erfc integral obtained when the Gaussian is written in absolute
/// displacements |w|, |z_j| with phase coefficient 4a+c-d:
///   psi 2^{1-(c+d)/2} int_0^inf exp(-pi(c+d - (4a+c-d) i) w^2/2) erfc(sqrt(pi/2) w)^{c+d} dw.
/// Q_N does not converge to this value; it is kept for comparison reports.
inline std::complex<double> q_infinity_folded(const ChainParams& params, const QuadratureSpec& spec = {}) {
    detail::require_q_infinity_params(params);
    const int m = params.clasps();
    const std::complex<double> coeff(m, -static_cast<double>(4 * params.a + params.c - params.d));
    const double pi = std::numbers::pi;
    const auto integrand = [=](double w) {
        return std::exp(-pi * coeff * (w * w / 2)) * std::pow(erfc(std::sqrt(pi / 2) * w), m);
    };
    const auto r = integrate_halfline(integrand, spec, GaussianEnvelope{1.0, pi * m / 2});
    return detail::psi(params) * std::pow(2.0, 1.0 - m / 2.0) * r.value;
}

/// Q_N = J_N N^{-(c+d+3)/2} S~_N^{-(c+d)} e^{-i CS N/(2 pi)} for b = 1.
template <class Real>
std::complex<double> q_quotient(const ChainParams& params, const SinePrefix<Real>& p) {
    using std::log;
    detail::require_q_infinity_params(params);
    const int N = p.N();
    const int m = params.clasps();
    const auto J = jones_at_root(params, p);
    if (J.is_zero()) return 0.0;
    const Real log_mag = J.log_mag - Real(m + 3) / 2 * log(Real(N)) - Real(m) * log_S_max(p);
    const Real phase = normalize_phase(J.phase - cs_phase<Real>(params, N));
    return std::polar(std::exp(static_cast<double>(log_mag)), static_cast<double>(phase));
}

/// Right-hand side of the asymptotic statements, with the exact S~_N.
/// Q_inf is computed once per predictor.
class Predictor {
public:
    explicit Predictor(const ChainParams& params, ESign sign = ESign::negative, const QuadratureSpec& spec = {})
        : params_(params), sign_(sign) {
        params_.validate();
        if (params_.b == 1) {
            if (params_.clasps() == 0) {
                if (params_.a != 0)
                    throw UnsupportedParameters(
                        "no prediction for b = 1, c + d = 0, a != 0 (quadratic Gauss-type sum)");
            } else {
                q_inf_ = q_infinity(params_, spec);
            }
        }
    }

    const ChainParams& params() const { return params_; }
    std::optional<std::complex<double>> q_inf() const { return q_inf_; }

    bool supports(int N) const { return params_.b == 1 || N % 2 == 1; }

    template <class Real>
    LogComplex<Real> operator()(const SinePrefix<Real>& p) const {
        using std::log;
        const int N = p.N();
        if (!supports(N)) throw DomainError("b >= 2 predictions exist for odd N only");
        const int m = params_.clasps();
        const Real logN = log(Real(N));

        if (params_.b == 1 && m == 0) return {2 * logN, Real(0)};

        LogComplex<Real> prefactor;
        if (params_.b == 1) {
            prefactor = {Real(std::log(std::abs(*q_inf_))), Real(std::arg(*q_inf_))};
        } else {
            // Re E / (2 pi) combined with S~_N ~ e^{...} / sqrt(2N) gives (c+d)(sign + 1/2) log 2.
            const Real s = sign_ == ESign::negative ? Real(-1) : Real(1);
            prefactor = LogComplex<Real>::polar(Real(m) * (s + Real(1) / 2) * log(Real(2)),
                                                pi_fraction<Real>(4 * params_.a + 3 * params_.c - 3 * params_.d, 4));
        }
        const Real exponent = params_.b == 1 ? Real(m + 3) / 2 : Real(m + 2 * params_.b) / 2;
        const Real growth = exponent * logN + (m > 0 ? Real(m) * log_S_max(p) : Real(0));
        return lc_mul(prefactor, LogComplex<Real>{growth, cs_phase<Real>(params_, N)});
    }

private:
    ChainParams params_;
    ESign sign_;
    std::optional<std::complex<double>> q_inf_;
};

template <class Real>
LogComplex<Real> predicted_jones(const ChainParams& params, const SinePrefix<Real>& p, ESign sign = ESign::negative) {
    return Predictor(params, sign)(p);
}

struct Prediction {
    ChainParams params;
    double vol = 0;
    double cs = 0;
    double d_coeff = 0;
    bool integral_defined = false;
    std::optional<std::complex<double>> e_term;
    ESign e_sign = ESign::negative;
    std::optional<std::complex<double>> q_inf;
};

inline Prediction predict(const ChainParams& params, ESign sign = ESign::negative, const QuadratureSpec& spec = {}) {
    params.validate();
    const Predictor predictor(params, sign, spec);  // throws for unsupported parameters
    Prediction out;
    out.params = params;
    out.vol = volume(params);
    out.cs = chern_simons(params);
    const auto g = growth_coefficients(params, sign);
    out.d_coeff = g.d_coeff;
    out.integral_defined = g.integral_defined;
    out.e_term = g.e_term;
    out.e_sign = sign;
    out.q_inf = predictor.q_inf();
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient extraction

struct FitSample {
    int N;
    double log_abs_J;
};

struct FitResult {
    double alpha = 0;  // coefficient of N
    double beta = 0;   // coefficient of log N
    double gamma = 0;  // constant
    double residual_rms = 0;
};

/// Least squares for log|J_N| = (alpha N + beta log N + gamma) / (2 pi).
inline FitResult fit_expansion(std::span<const FitSample> samples) {
    if (samples.size() < 4) throw FitError("fit_expansion needs at least 4 samples");
    std::vector<int> distinct;
    for (const auto& s : samples) {
        if (!std::isfinite(s.log_abs_J)) throw DomainError("fit_expansion: non-finite log|J| sample");
        if (s.N < 1) throw DomainError("fit_expansion: N must be positive");
        if (std::find(distinct.begin(), distinct.end(), s.N) == distinct.end()) distinct.push_back(s.N);
    }
    if (distinct.size() < 3) throw FitError("fit_expansion: rank-deficient design (fewer than 3 distinct N)");

    const double two_pi = 2 * std::numbers::pi;
    const auto rows = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd design(rows, 3);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        design(i, 0) = s.N / two_pi;
        design(i, 1) = std::log(static_cast<double>(s.N)) / two_pi;
        design(i, 2) = 1.0 / two_pi;
        rhs(i) = s.log_abs_J;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) throw FitError("fit_expansion: rank-deficient design");
    const Eigen::Vector3d coef = qr.solve(rhs);
    const Eigen::VectorXd resid = design * coef - rhs;
    return {coef(0), coef(1), coef(2), std::sqrt(resid.squaredNorm() / static_cast<double>(rows))};
}

inline FitResult fit_expansion(const std::vector<FitSample>& samples) {
    return fit_expansion(std::span<const FitSample>(samples));
}

} // namespace chainvol
