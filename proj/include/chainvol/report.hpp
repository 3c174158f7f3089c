#pragma once

// Scan tables and serializers: CSV for scans, JSON for predictions and lemma
// reports, and a minimal SVG convergence plot.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainvol/arith.hpp"
#include "chainvol/asymptote.hpp"
#include "chainvol/invariant.hpp"
#include "chainvol/lemma_lab.hpp"
#include "chainvol/parallel.hpp"

namespace chainvol {

using Json = nlohmann::ordered_json;

struct ScanRow {
    int N = 0;
    double log_abs_J = 0;  // -inf for an exact zero
    double phase_J = 0;
    double scaled = 0;     // 2 pi log_abs_J / N
    std::optional<double> predicted_scaled;
};

inline double scaled_value(double log_abs, int N) { return 2.0 * std::numbers::pi * log_abs / N; }

/// One row per N in [N_min, N_max] (odd N only if requested), ordered by N.
inline std::vector<ScanRow> scan(const ChainParams& params, int N_min, int N_max, bool odd_only,
                                 Precision precision = {}, ESign sign = ESign::negative) {
    params.validate();
    if (N_min < 1 || N_min > N_max) throw DomainError("scan needs 1 <= Nmin <= Nmax");
    std::vector<int> Ns;
    for (int N = N_min; N <= N_max; ++N)
        if (!odd_only || N % 2 == 1) Ns.push_back(N);

    std::optional<Predictor> predictor;
    try {
        predictor.emplace(params, sign);
    } catch (const UnsupportedParameters&) {
    }

    return parallel_map<ScanRow>(Ns.size(), [&](std::size_t i) {
        const int N = Ns[i];
        ScanRow row;
        row.N = N;
        with_precision(precision, [&](auto tag) {
            using Real = typename decltype(tag)::type;
            if (params.b >= 2 && N % 2 == 0) {
                row.log_abs_J = -std::numeric_limits<double>::infinity();
                return;
            }
            const SinePrefix<Real> p(N);
            const auto J = to_double(jones_at_root(params, p));
            row.log_abs_J = J.log_mag;
            row.phase_J = J.is_zero() ? 0.0 : J.phase;
            if (predictor && predictor->supports(N))
                row.predicted_scaled = scaled_value(static_cast<double>((*predictor)(p).log_mag), N);
        });
        row.scaled = scaled_value(row.log_abs_J, N);
        return row;
    });
}

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
    out << "N,log_abs_J,phase_J,scaled,predicted_scaled\n";
    for (const auto& r : rows) {
        out << r.N << ',' << format_g17(r.log_abs_J) << ',' << format_g17(r.phase_J) << ','
            << format_g17(r.scaled) << ',';
        if (r.predicted_scaled) out << format_g17(*r.predicted_scaled);
        out << '\n';
    }
}

/// Polyline of the scaled value against N with a reference line at `reference`.
inline void write_scan_svg(std::ostream& out, const std::vector<ScanRow>& rows, double reference,
                           const std::string& title) {
    constexpr double width = 800, height = 500, left = 70, right = 20, top = 40, bottom = 50;
    std::vector<const ScanRow*> finite;
    for (const auto& r : rows)
        if (std::isfinite(r.scaled)) finite.push_back(&r);

    double x_min = rows.empty() ? 0 : rows.front().N, x_max = rows.empty() ? 1 : rows.back().N;
    if (x_max <= x_min) x_max = x_min + 1;
    double y_min = reference, y_max = reference;
    for (const auto* r : finite) {
        y_min = std::min(y_min, r->scaled);
        y_max = std::max(y_max, r->scaled);
    }
    if (y_max - y_min < 1e-9) {
        y_min -= 1;
        y_max += 1;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">N</text>\n"
        << "<text x=\"18\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
        << "transform=\"rotate(-90 18 " << (top + height - bottom) / 2 << ")\">(2π/N) log|J_N|</text>\n"
        << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\" font-size=\"11\">" << fmt(x_min)
        << "</text>\n"
        << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(x_max) << "</text>\n"
        << "<text x=\"" << left - 4 << "\" y=\"" << py(y_min) << "\" text-anchor=\"end\" font-size=\"11\">"
        << fmt(y_min) << "</text>\n"
        << "<text x=\"" << left - 4 << "\" y=\"" << py(y_max) + 10 << "\" text-anchor=\"end\" font-size=\"11\">"
        << fmt(y_max) << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << py(reference) << "\" x2=\"" << width - right << "\" y2=\""
        << py(reference) << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n"
        << "<text x=\"" << width - right << "\" y=\"" << py(reference) - 4
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"red\">Vol = " << fmt(reference) << "</text>\n"
        << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < finite.size(); ++i)
        out << (i ? " " : "") << fmt(px(finite[i]->N)) << ',' << fmt(py(finite[i]->scaled));
    out << "\"/>\n</svg>\n";
}

inline Json to_json(const LemmaReport& r) {
    Json j;
    j["lemma_id"] = to_string(r.lemma_id);
    j["passed"] = r.passed;
    Json residuals = Json::array();
    for (const auto& [label, value] : r.residuals)
        if (std::isfinite(value)) residuals.push_back(Json::array({label, value}));
    j["residuals"] = residuals;
    if (!r.fitted_exponents.empty()) {
        Json fitted = Json::object();
        for (const auto& [k, v] : r.fitted_exponents)
            if (std::isfinite(v)) fitted[k] = v;
        j["fitted_exponents"] = fitted;
    }
    j["notes"] = r.notes;
    return j;
}

inline Json to_json(const Prediction& p) {
    Json j;
    j["a"] = p.params.a;
    j["b"] = p.params.b;
    j["c"] = p.params.c;
    j["d"] = p.params.d;
    j["vol"] = p.vol;
    j["cs"] = p.cs;
    j["d_coeff"] = p.d_coeff;
    if (p.e_term) {
        j["e_real"] = p.e_term->real();
        j["e_imag"] = p.e_term->imag();
        if (p.params.b >= 2) j["e_sign_convention"] = to_string(p.e_sign);
    }
    if (p.integral_defined) j["e_integral_defined"] = true;
    if (p.q_inf) {
        j["q_inf_re"] = p.q_inf->real();
        j["q_inf_im"] = p.q_inf->imag();
    }
    return j;
}

} // namespace chainvol
