#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "chainvol/invariant.hpp"
#include "oracles.hpp"

using chainvol::ChainParams;
using std::numbers::pi;

namespace {

using cld = std::complex<long double>;

// Closed-form J at t = e^{2 pi i/N} from literal products, in long double.
cld direct_jones(const ChainParams& p, int N) {
    const int m = p.c + p.d;
    const int e = 4 * p.a - p.c + p.d;
    cld phase_phi = 1;
    if (m == 1)
        phase_phi = std::polar(1.0L, oracle::pi * (N - 1) * (p.c - p.d) / N);
    else if (((N - 1) * (p.c - p.d)) % 2 != 0)
        phase_phi = -1;
    auto chi_pow = [&](int n) { return std::polar(1.0L, oracle::pi * e * n * (n + 1.0L - N) / (2.0L * N)); };
    auto clasp = [&](int n) {
        long double s = 0;
        for (int k = 0; k <= N - 1 - n; ++k) s += oracle::direct_S(n, k, N);
        return s;
    };
    if (p.b >= 2) {
        if (N % 2 == 0) return 0;
        const int M = (N - 1) / 2;
        return phase_phi * std::pow(static_cast<long double>(N), p.b) * chi_pow(M) * std::pow(clasp(M), m);
    }
    cld total = 0;
    for (int n = 0; n < N; ++n) total += static_cast<long double>(2 * n + 1) * chi_pow(n) * std::pow(clasp(n), m);
    return phase_phi * total;
}

std::complex<double> as_complex(const chainvol::LogComplex<double>& x) {
    const auto c = chainvol::lc_to_cartesian(x);
    return {c.re, c.im};
}

} // namespace

TEST(SinePrefix, FrozenValues) {
    // s_1 at N = 4: -log(sqrt 2); s_{N-1} = -log N.
    const auto p4 = chainvol::sine_prefix(4);
    EXPECT_NEAR(p4[1], -0.346573590279972654709, 1e-15);
    EXPECT_NEAR(p4[3], -std::log(4.0), 1e-15);
    const auto p100 = chainvol::sine_prefix(100);
    EXPECT_NEAR(p100[99], -4.60517018598809136804, 1e-13);
}

TEST(SinePrefix, MatchesDirectSumAndSymmetry) {
    for (int N : {3, 10, 64, 257}) {
        const auto p = chainvol::sine_prefix(N);
        for (int m = 0; m < N; ++m) EXPECT_NEAR(p[m], static_cast<double>(oracle::direct_s(m, N)), 1e-12);
        EXPECT_NEAR(p[N - 1], -std::log(static_cast<double>(N)), 1e-12);
    }
}

TEST(SinePrefix, RejectsNonPositiveN) { EXPECT_THROW(chainvol::sine_prefix(0), chainvol::DomainError); }

TEST(LogS, EdgeCases) {
    const auto p = chainvol::sine_prefix(12);
    EXPECT_EQ(chainvol::log_S(0, 5, p), 0.0);
    EXPECT_NEAR(chainvol::log_S(11, 0, p), std::log(12.0), 1e-14);  // prod 2 sin(j pi/N) = N
    EXPECT_THROW(chainvol::log_S(6, 6, p), chainvol::DomainError);
    EXPECT_THROW(chainvol::log_S(-1, 0, p), chainvol::DomainError);
}

TEST(LogS, ExhaustiveAgainstDirectProduct) {
    for (int N = 2; N <= 50; ++N) {
        const auto p = chainvol::sine_prefix(N);
        for (int n = 0; n < N; ++n)
            for (int k = 0; n + k <= N - 1; ++k) {
                const double want = std::log(static_cast<double>(oracle::direct_S(n, k, N)));
                EXPECT_NEAR(chainvol::log_S(n, k, p), want, 1e-12) << "N=" << N << " n=" << n << " k=" << k;
            }
    }
}

namespace {
struct Argmax {
    int n, k;
    double log_value;
};
Argmax exhaustive_max(const chainvol::SinePrefix<double>& p) {
    Argmax best{0, 0, -INFINITY};
    for (int n = 0; n < p.N(); ++n)
        for (int k = 0; n + k <= p.N() - 1; ++k)
            if (chainvol::log_S(n, k, p) > best.log_value) best = {n, k, chainvol::log_S(n, k, p)};
    return best;
}
} // namespace

TEST(LogS, MaximalTermIsExhaustiveMaximum) {
    for (int N : {17, 101}) {
        const auto best = exhaustive_max(chainvol::sine_prefix(N));
        EXPECT_EQ(best.n, N / 2);
        EXPECT_EQ(best.k, N / 4);
    }
}

// For N = 0, 3 mod 4 the discrete maximum sits one step away, at
// (floor(N/2) + 1, floor(N/4) - 1), and exceeds S~_N by O(1/N).
TEST(LogS, MaximalTermOffByOneStepForSomeResidues) {
    const auto p40 = chainvol::sine_prefix(40);
    const auto best = exhaustive_max(p40);
    EXPECT_EQ(best.n, 21);
    EXPECT_EQ(best.k, 9);
    EXPECT_NEAR(best.log_value, std::log(static_cast<double>(oracle::direct_S(21, 9, 40))), 1e-12);
    EXPECT_NEAR(best.log_value - chainvol::log_S_max(p40), 0.0030874, 1e-6);
    for (int N = 8; N <= 160; ++N) {
        const auto p = chainvol::sine_prefix(N);
        const double excess = exhaustive_max(p).log_value - chainvol::log_S_max(p);
        EXPECT_GE(excess, 0.0);
        EXPECT_LT(excess * N, 1.6) << "N=" << N;
    }
}

TEST(Chi, Values) {
    EXPECT_EQ(chainvol::chi(5, 0).phase, 0.0);
    EXPECT_NEAR(chainvol::chi(5, 4).phase, 0.0, 1e-15);
    // n(n+1-N)/(2N) = 2*(-2)/10 -> -2 pi/5
    EXPECT_NEAR(chainvol::chi(5, 2).phase, -2 * pi / 5, 1e-15);
    EXPECT_THROW(chainvol::chi(5, 5), chainvol::DomainError);
}

TEST(JonesAtRoot, FrozenValues) {
    auto check = [](ChainParams p, int N, std::complex<double> want) {
        const auto got = as_complex(chainvol::jones_at_root(p, N));
        EXPECT_LT(std::abs(got - want), 1e-8 * std::max(1.0, std::abs(want))) << chainvol::to_string(p) << " N=" << N;
    };
    check({0, 1, 1, 0}, 2, {0, 8});
    check({0, 1, 1, 0}, 3, {-18, 20.78460969082652});
    check({0, 1, 1, 1}, 2, {16, 0});
    check({0, 1, 1, 1}, 3, {90, 0});
    check({0, 2, 1, 1}, 3, {108, 0});
    check({1, 1, 0, 0}, 2, {4, 0});
}

TEST(JonesAtRoot, MatchesDirectProductOracle) {
    const std::vector<ChainParams> params{{0, 1, 0, 0}, {1, 1, 0, 0},  {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 1, 1, 1},
                                          {1, 1, 2, 0}, {-1, 1, 0, 2}, {0, 2, 1, 0}, {2, 3, 1, 2}, {0, 1, 3, 0}};
    for (const auto& p : params)
        for (int N = 1; N <= 30; ++N) {
            const auto want = direct_jones(p, N);
            const std::complex<double> w(static_cast<double>(want.real()), static_cast<double>(want.imag()));
            const auto got = as_complex(chainvol::jones_at_root(p, N));
            EXPECT_LT(std::abs(got - w), 1e-11 * std::max(1.0, std::abs(w))) << chainvol::to_string(p) << " N=" << N;
        }
}

TEST(JonesAtRoot, UnknotLikeAndBeltPowers) {
    for (int N = 1; N <= 40; ++N) {
        const auto unclasped = chainvol::jones_at_root(ChainParams{0, 1, 0, 0}, N);
        EXPECT_NEAR(unclasped.log_mag, 2 * std::log(static_cast<double>(N)), 1e-12);
        EXPECT_NEAR(std::sin(unclasped.phase), 0.0, 1e-12);
        EXPECT_GT(std::cos(unclasped.phase), 0.0);
        if (N % 2 == 1)
            for (int b = 2; b <= 4; ++b) {
                const auto r = chainvol::jones_at_root(ChainParams{0, b, 0, 0}, N);
                EXPECT_NEAR(r.log_mag, b * std::log(static_cast<double>(N)), 1e-12);
            }
    }
}

TEST(JonesAtRoot, EvenNVanishesForSeveralBelts) {
    for (int N = 2; N <= 40; N += 2) EXPECT_TRUE(chainvol::jones_at_root(ChainParams{0, 2, 1, 0}, N).is_zero());
}

TEST(JonesAtRoot, MirrorConjugates) {
    for (const ChainParams p : {ChainParams{1, 1, 1, 0}, ChainParams{0, 1, 2, 1}, ChainParams{-2, 1, 1, 1}, ChainParams{1, 3, 1, 0}})
        for (int N = 3; N <= 41; N += 2) {
            const auto x = as_complex(chainvol::jones_at_root(p, N));
            const auto y = as_complex(chainvol::jones_at_root(p.mirror(), N));
            EXPECT_LT(std::abs(x - std::conj(y)), 1e-10 * std::abs(x)) << chainvol::to_string(p) << " N=" << N;
        }
}

TEST(JonesAtRoot, ExtendedPrecisionAgrees) {
    const ChainParams p{0, 1, 2, 0};
    for (int N : {25, 101}) {
        const auto d = chainvol::jones_at_root(p, N, chainvol::Precision{16});
        const auto e = chainvol::jones_at_root(p, N, chainvol::Precision{50});
        EXPECT_NEAR(d.log_mag, e.log_mag, 1e-12 * std::abs(e.log_mag));
        EXPECT_NEAR(std::remainder(d.phase - e.phase, 2 * pi), 0.0, 1e-9);
    }
}

TEST(JonesAtRoot, LargeNStaysFinite) {
    const auto r = chainvol::jones_at_root(ChainParams{0, 1, 3, 0}, 2001);
    EXPECT_TRUE(std::isfinite(r.log_mag));
    EXPECT_GT(r.log_mag, 700);  // beyond double range as a plain number
}

TEST(JonesGeneric, FrozenValue) {
    const auto v = chainvol::jones_generic(ChainParams{1, 1, 0, 0}, 2, chainvol::EvaluationPoint(0.1));
    EXPECT_NEAR(v.real(), 4.71322745580144015175, 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(TangleValues, FrozenValues) {
    const chainvol::EvaluationPoint pt({0.1, 2.0});
    const auto off = chainvol::tangle_values(1, 3, pt, false);
    EXPECT_LT(std::abs(off.twist - std::complex<double>(-0.798362121376615924579, -0.924360655151602555477)), 1e-13);
    EXPECT_LT(std::abs(off.belt - std::complex<double>(3.00740596151555132464, -0.170175379010432913432)), 1e-13);
    EXPECT_LT(std::abs(off.clasp - std::complex<double>(2.88621899378954389649, 1.95412308327391827236)), 1e-12);
    EXPECT_LT(std::abs(off.clasp_mirror - std::complex<double>(3.29116583356313782758, -2.00171802014057550683)),
              1e-12);
    const auto on = chainvol::tangle_values(1, 3, pt, true);
    EXPECT_LT(std::abs(on.clasp - std::complex<double>(-3.51067040654261405120, 3.83574921202263095873)), 1e-12);
}

TEST(JonesGeneric, TrivialCases) {
    const chainvol::EvaluationPoint pt({0.2, 0.3});
    EXPECT_EQ(chainvol::jones_generic(ChainParams{1, 2, 1, 1}, 1, pt), std::complex<double>(1.0));
    EXPECT_THROW(chainvol::jones_generic(ChainParams{0, 1, 1, 0}, 4, chainvol::EvaluationPoint::near_root(4, 0.0)),
                 chainvol::DomainError);
}

TEST(LimitCrossCheck, DecadicExampleAtNTwo) {
    const auto r = chainvol::limit_cross_check(ChainParams{0, 1, 1, 0}, 2, {1e-2, 1e-3, 1e-4});
    EXPECT_LE(r.deviation, 1e-6);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.partial_deviations.size(), 3u);
}

TEST(LimitCrossCheck, AgreesForSmallN) {
    const std::vector<ChainParams> params{{0, 1, 1, 0}, {1, 1, 0, 1}, {0, 1, 1, 1}, {0, 2, 1, 0}, {-1, 1, 2, 0}};
    for (const auto& p : params)
        for (int N : {2, 3, 4, 5, 7}) {
            const auto r = chainvol::limit_cross_check(p, N, {1e-3, 1e-4, 1e-5, 1e-6});
            EXPECT_LT(r.deviation, 1e-8) << chainvol::to_string(p) << " N=" << N;
        }
}

TEST(LimitCrossCheck, RejectsBadInput) {
    EXPECT_THROW(chainvol::limit_cross_check(ChainParams{0, 1, 1, 0}, 26, {1e-3}), chainvol::DomainError);
    EXPECT_THROW(chainvol::limit_cross_check(ChainParams{0, 1, 1, 0}, 5, {1e-3, 1e-2}), chainvol::DomainError);
    EXPECT_THROW(chainvol::limit_cross_check(ChainParams{0, 1, 1, 0}, 5, {}), chainvol::DomainError);
}

TEST(ChainParams, Validation) {
    EXPECT_THROW(chainvol::jones_at_root(ChainParams{0, 0, 1, 0}, 5), chainvol::DomainError);
    EXPECT_THROW(chainvol::jones_at_root(ChainParams{0, 1, -1, 0}, 5), chainvol::DomainError);
    EXPECT_THROW(chainvol::jones_at_root(ChainParams{0, 1, 1, 0}, 0), chainvol::DomainError);
}
