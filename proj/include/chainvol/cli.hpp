#pragma once

// Command-line front end. Exit codes: 0 success/pass, 1 verification failed,
// 2 bad arguments, 3 I/O error, 4 unsupported parameters.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainvol/asymptote.hpp"
#include "chainvol/invariant.hpp"
#include "chainvol/lemma_lab.hpp"
#include "chainvol/report.hpp"

namespace chainvol::cli {

enum ExitCode : int { ok = 0, failed = 1, bad_arguments = 2, io_error = 3, unsupported = 4 };

namespace detail {

inline void add_chain_options(CLI::App& cmd, ChainParams& p) {
    cmd.add_option("--a", p.a, "twist count (sign = handedness)");
    cmd.add_option("--b", p.b, "belt count (>= 1)");
    cmd.add_option("--c", p.c, "clasp count (>= 0)");
    cmd.add_option("--d", p.d, "mirror-clasp count (>= 0)");
}

inline std::vector<int> parse_ladder(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad ladder entry: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty N ladder");
    return out;
}

inline std::vector<int> odd_range(int lo, int hi) {
    std::vector<int> out;
    for (int N = lo | 1; N <= hi; N += 2) out.push_back(N);
    return out;
}

// Flag > CHAINVOL_PRECISION > 16 digits.
inline Precision resolve_precision(const std::optional<int>& flag) {
    if (flag) return Precision(*flag);
    if (const char* env = std::getenv("CHAINVOL_PRECISION")) {
        std::size_t used = 0;
        const std::string text(env);
        const int digits = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument("CHAINVOL_PRECISION must be an integer");
        return Precision(digits);
    }
    return Precision{};
}

inline int run_jones(const ChainParams& p, int N, const std::optional<int>& precision_flag, bool csv,
                     std::ostream& out, std::ostream& err) {
    p.validate();
    if (N < 1) throw DomainError("N must be >= 1");
    const Precision precision = resolve_precision(precision_flag);
    const auto J = jones_at_root(p, N, precision);

    std::optional<Cartesian<double>> cart;
    if (lc_representable(J))
        cart = lc_to_cartesian(J);
    else
        err << "warning: |J_N| exceeds the double range; re/im omitted\n";

    if (csv) {
        out << "a,b,c,d,N,log_mag,phase,re,im\n"
            << p.a << ',' << p.b << ',' << p.c << ',' << p.d << ',' << N << ',' << format_g17(J.log_mag) << ','
            << format_g17(J.is_zero() ? 0.0 : J.phase) << ',';
        if (cart) out << format_g17(cart->re) << ',' << format_g17(cart->im);
        else out << ',';
        out << '\n';
        return ok;
    }

    Json j;
    j["a"] = p.a;
    j["b"] = p.b;
    j["c"] = p.c;
    j["d"] = p.d;
    j["N"] = N;
    j["precision"] = precision.digits;
    if (J.is_zero()) {
        j["zero"] = true;
        j["note"] = "even N, b >= 2: exact zero";
    } else {
        j["log_mag"] = J.log_mag;
        j["phase"] = J.phase;
    }
    if (cart) {
        j["re"] = cart->re;
        j["im"] = cart->im;
    }
    out << j.dump(2) << '\n';
    return ok;
}

inline int run_scan(const ChainParams& p, int N_min, int N_max, bool odd_only, const std::string& out_path,
                    const std::string& plot_path, const std::optional<int>& precision_flag, std::ostream& out,
                    std::ostream& err) {
    p.validate();
    if (N_min < 1 || N_min > N_max) {
        err << "error: need 1 <= Nmin <= Nmax\n";
        return bad_arguments;
    }
    const auto rows = scan(p, N_min, N_max, odd_only, resolve_precision(precision_flag));
    if (out_path.empty()) {
        write_scan_csv(out, rows);
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << out_path << " for writing\n";
            return io_error;
        }
        write_scan_csv(file, rows);
        if (!file.flush()) {
            err << "error: failed writing " << out_path << '\n';
            return io_error;
        }
    }
    if (!plot_path.empty()) {
        std::ofstream svg(plot_path, std::ios::binary);
        if (!svg) {
            err << "error: cannot open " << plot_path << " for writing\n";
            return io_error;
        }
        write_scan_svg(svg, rows, volume(p), to_string(p));
        if (!svg.flush()) {
            err << "error: failed writing " << plot_path << '\n';
            return io_error;
        }
    }
    return ok;
}

inline int run_predict(const ChainParams& p, double quad_tol, const std::string& e_sign, std::ostream& out) {
    QuadratureSpec spec;
    spec.abs_tol = quad_tol;
    spec.rel_tol = std::max(quad_tol, 1e-14);
    const ESign sign = e_sign == "positive" ? ESign::positive : ESign::negative;
    out << to_json(predict(p, sign, spec)).dump(2) << '\n';
    return ok;
}

inline int run_verify(const std::string& lemma, const ChainParams& p, const std::string& ladder_text, double tol,
                      std::ostream& out) {
    const std::optional<std::vector<int>> ladder =
        ladder_text.empty() ? std::nullopt : std::optional(parse_ladder(ladder_text));
    LemmaReport report;
    if (lemma == "fcrit") {
        report = verify_critical_point(tol);
    } else if (lemma == "2a" || lemma == "2b") {
        const auto Ns = ladder.value_or(std::vector<int>{100, 200, 400, 800, 1600});
        const auto both = verify_lemma2(Ns, p, default_delta(p), {1200});
        report = lemma == "2a" ? both.central : both.far;
    } else if (lemma == "3") {
        report = verify_lemma3(ladder.value_or(std::vector<int>{1000, 10000, 100000}));
    } else if (lemma == "45") {
        const std::vector<int> fallback =
            p.b == 1 ? std::vector<int>{251, 501, 1001, 2001} : std::vector<int>{101, 401, 1601};
        report = verify_lemma45(p, ladder.value_or(fallback));
    } else {  // main
        report = verify_main(p, ladder.value_or(odd_range(101, 1501)));
    }
    out << to_json(report).dump(2) << '\n';
    return report.passed ? ok : failed;
}

} // namespace detail

/// Runs the command line; never calls exit().
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Colored Jones invariants of Whitehead chains at t = e^{2 pi i/N}"};
    app.require_subcommand(1);

    ChainParams params{0, 1, 1, 0};
    std::optional<int> precision;
    int N = 1, N_min = 1, N_max = 1;
    bool json_flag = false, csv_flag = false, odd_only = false;
    std::string out_path, plot_path, lemma, ladder, e_sign = "negative";
    double quad_tol = 1e-12, tol = 1e-8;

    auto* jones = app.add_subcommand("jones", "evaluate J_N at the root of unity");
    detail::add_chain_options(*jones, params);
    jones->add_option("--N", N, "color (>= 1)")->required();
    jones->add_option("--precision", precision, "significant digits (10..100)");
    auto* json_opt = jones->add_flag("--json", json_flag, "JSON output (default)");
    jones->add_flag("--csv", csv_flag, "CSV output")->excludes(json_opt);

    auto* scan_cmd = app.add_subcommand("scan", "tabulate (2 pi/N) log|J_N| over a range of N");
    detail::add_chain_options(*scan_cmd, params);
    scan_cmd->add_option("--Nmin", N_min)->required();
    scan_cmd->add_option("--Nmax", N_max)->required();
    scan_cmd->add_flag("--odd-only", odd_only);
    scan_cmd->add_option("--out", out_path, "CSV path (default stdout)");
    scan_cmd->add_option("--plot", plot_path, "SVG path");
    scan_cmd->add_option("--precision", precision, "significant digits (10..100)");

    auto* predict_cmd = app.add_subcommand("predict", "predicted asymptotic data");
    detail::add_chain_options(*predict_cmd, params);
    predict_cmd->add_option("--quad-tol", quad_tol, "absolute tolerance for Q_inf")->check(CLI::PositiveNumber);
    predict_cmd->add_option("--e-sign", e_sign, "Re E sign convention for b >= 2")
        ->check(CLI::IsMember({"negative", "positive"}));

    auto* verify_cmd = app.add_subcommand("verify", "numerical lemma checks");
    detail::add_chain_options(*verify_cmd, params);
    verify_cmd->add_option("--lemma", lemma)->required()->check(CLI::IsMember({"fcrit", "2a", "2b", "3", "45", "main"}));
    verify_cmd->add_option("--N-ladder", ladder, "comma-separated N values");
    verify_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }

    try {
        if (jones->parsed()) return detail::run_jones(params, N, precision, csv_flag, out, err);
        if (scan_cmd->parsed())
            return detail::run_scan(params, N_min, N_max, odd_only, out_path, plot_path, precision, out, err);
        if (predict_cmd->parsed()) return detail::run_predict(params, quad_tol, e_sign, out);
        return detail::run_verify(lemma, params, ladder, tol, out);
    } catch (const UnsupportedParameters& e) {
        err << "unsupported: " << e.what() << '\n';
        return unsupported;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    }
}

} // namespace chainvol::cli
