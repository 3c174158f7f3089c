#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainvol/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"chainvol"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = chainvol::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
    if (!line.empty() && line.back() == ',') v.emplace_back();
    return v;
}

} // namespace

TEST(CliJones, JsonOutput) {
    const auto r = run({"jones", "--a", "0", "--b", "1", "--c", "1", "--d", "1", "--N", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["re"].get<double>(), 90.0, 1e-9);
    EXPECT_NEAR(j["im"].get<double>(), 0.0, 1e-9);
    EXPECT_EQ(j["precision"].get<int>(), 16);
}

TEST(CliJones, NegativeTwistParses) {
    const auto r = run({"jones", "--a", "-1", "--c", "1", "--N", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto mirror = run({"jones", "--a", "1", "--c", "0", "--d", "1", "--N", "5"});
    ASSERT_EQ(mirror.code, 0) << mirror.err;
    const auto x = nlohmann::json::parse(r.out), y = nlohmann::json::parse(mirror.out);
    EXPECT_NEAR(x["re"].get<double>(), y["re"].get<double>(), 1e-9);
    EXPECT_NEAR(x["im"].get<double>(), -y["im"].get<double>(), 1e-9);
}

TEST(CliJones, EvenNSeveralBeltsIsExactZero) {
    const auto r = run({"jones", "--b", "2", "--N", "4"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["zero"].get<bool>());
}

TEST(CliJones, CsvOutput) {
    const auto r = run({"jones", "--N", "2", "--csv"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0], "a,b,c,d,N,log_mag,phase,re,im");
    const auto f = fields(ls[1]);
    ASSERT_EQ(f.size(), 9u);
    EXPECT_NEAR(std::stod(f[8]), 8.0, 1e-12);
}

TEST(CliJones, BadArguments) {
    EXPECT_EQ(run({"jones", "--N", "0"}).code, 2);
    EXPECT_EQ(run({"jones", "--b", "0", "--N", "3"}).code, 2);
    EXPECT_EQ(run({"jones", "--c", "-1", "--N", "3"}).code, 2);
    EXPECT_EQ(run({"jones", "--N", "3", "--precision", "5"}).code, 2);
    EXPECT_EQ(run({"jones"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"jones", "--N", "3", "--json", "--csv"}).code, 2);
}

TEST(CliJones, PrecisionFromEnvironment) {
    ::setenv("CHAINVOL_PRECISION", "40", 1);
    const auto from_env = run({"jones", "--N", "7"});
    const auto flag_wins = run({"jones", "--N", "7", "--precision", "20"});
    ::setenv("CHAINVOL_PRECISION", "abc", 1);
    const auto bad_env = run({"jones", "--N", "7"});
    ::unsetenv("CHAINVOL_PRECISION");
    ASSERT_EQ(from_env.code, 0);
    EXPECT_EQ(nlohmann::json::parse(from_env.out)["precision"].get<int>(), 40);
    EXPECT_EQ(nlohmann::json::parse(flag_wins.out)["precision"].get<int>(), 20);
    EXPECT_EQ(bad_env.code, 2);
}

TEST(CliScan, DeterministicCsvWithScaledColumn) {
    const auto r1 = run({"scan", "--c", "1", "--Nmin", "5", "--Nmax", "40"});
    const auto r2 = run({"scan", "--c", "1", "--Nmin", "5", "--Nmax", "40"});
    ASSERT_EQ(r1.code, 0) << r1.err;
    EXPECT_EQ(r1.out, r2.out);
    const auto ls = lines(r1.out);
    ASSERT_EQ(ls.size(), 37u);
    EXPECT_EQ(ls[0], "N,log_abs_J,phase_J,scaled,predicted_scaled");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto f = fields(ls[i]);
        ASSERT_EQ(f.size(), 5u);
        const int N = std::stoi(f[0]);
        const double log_abs = std::stod(f[1]);
        // scaled is (2 pi / N) log|J|, computed from the same double.
        EXPECT_EQ(std::stod(f[3]), 2.0 * std::numbers::pi * log_abs / N) << ls[i];
    }
}

TEST(CliScan, OddOnlyAndEvenZeros) {
    const auto odd = run({"scan", "--b", "2", "--Nmin", "4", "--Nmax", "9", "--odd-only"});
    ASSERT_EQ(odd.code, 0);
    EXPECT_EQ(lines(odd.out).size(), 4u);  // header + 5, 7, 9
    const auto all = run({"scan", "--b", "2", "--Nmin", "4", "--Nmax", "5"});
    const auto row = fields(lines(all.out)[1]);
    EXPECT_EQ(row[0], "4");
    EXPECT_EQ(row[1], "-inf");
}

TEST(CliScan, RangeErrors) {
    EXPECT_EQ(run({"scan", "--Nmin", "10", "--Nmax", "5"}).code, 2);
    EXPECT_EQ(run({"scan", "--Nmin", "1", "--Nmax", "5", "--out", "/nonexistent-dir/x.csv"}).code, 3);
}

TEST(CliScan, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = (dir / "chainvol_scan_test.csv").string();
    const auto svg = (dir / "chainvol_scan_test.svg").string();
    const auto r = run({"scan", "--Nmin", "3", "--Nmax", "30", "--out", csv.c_str(), "--plot", svg.c_str()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in_csv(csv), in_svg(svg);
    std::stringstream a, b;
    a << in_csv.rdbuf();
    b << in_svg.rdbuf();
    EXPECT_EQ(lines(a.str()).size(), 29u);
    EXPECT_NE(b.str().find("<svg"), std::string::npos);
    std::filesystem::remove(csv);
    std::filesystem::remove(svg);
}

TEST(CliPredict, WhiteheadFields) {
    const auto r = run({"predict", "--c", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["vol"].get<double>(), 3.66386237670887606022, 1e-14);
    EXPECT_NEAR(j["q_inf_re"].get<double>(), -0.321797126452791312368, 1e-10);
    EXPECT_NEAR(j["q_inf_im"].get<double>(), 0.776886987015018653672, 1e-10);
    EXPECT_TRUE(j["e_integral_defined"].get<bool>());
}

TEST(CliPredict, UnsupportedAndInvalid) {
    EXPECT_EQ(run({"predict", "--a", "1", "--c", "0", "--d", "0"}).code, 4);
    EXPECT_EQ(run({"predict", "--a", "0", "--c", "0", "--d", "0"}).code, 0);
    EXPECT_EQ(run({"predict", "--quad-tol", "-1"}).code, 2);
    EXPECT_EQ(run({"predict", "--b", "2", "--e-sign", "sideways"}).code, 2);
}

TEST(CliVerify, CriticalPointPasses) {
    const auto r = run({"verify", "--lemma", "fcrit"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["lemma_id"].get<std::string>(), "F_CRITICAL");
    EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(CliVerify, LadderParsing) {
    EXPECT_EQ(run({"verify", "--lemma", "45", "--N-ladder", "101,2x1"}).code, 2);
    EXPECT_EQ(run({"verify", "--lemma", "45", "--N-ladder", "101,200"}).code, 2);
    EXPECT_EQ(run({"verify", "--lemma", "nope"}).code, 2);
    EXPECT_EQ(run({"verify", "--lemma", "45", "--N-ladder", "101,201,401"}).code, 0);
}

#ifdef CHAINVOL_CLI_PATH
TEST(CliBinary, HelpAndExitCodes) {
    const std::string exe = CHAINVOL_CLI_PATH;
    EXPECT_EQ(std::system((exe + " --help > /dev/null").c_str()), 0);
    const int status = std::system((exe + " jones --N 0 > /dev/null 2>&1").c_str());
    EXPECT_EQ(WEXITSTATUS(status), 2);
}
#endif
