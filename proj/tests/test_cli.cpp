#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ptsusy/io.hpp"

using namespace ptsusy;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

/// Runs the CLI with args; stderr is folded into out when merge_stderr is set.
Run run(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(PTSUSY_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expected_code = 0) {
    const auto r = run(args + " --format json");
    EXPECT_EQ(r.code, expected_code) << args;
    return json::parse(r.out);
}

const std::string osc = "--family oscillator --alpha 2.5 --delta 1";
const std::string pt = "--family poschl-teller --A 1.2 --B 3.9 --gamma 0.3";
const std::string scarf = "--family scarf --A 2.3 --B 1.4";

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / ("ptsusy_cli_" + name); }

}  // namespace

TEST(CliSpectrum, PsusyDegeneracies) {
    const auto j = run_json("spectrum " + osc + " --psusy first");
    EXPECT_EQ(j.at("schema_version"), io::schema_version);
    std::vector<int> d;
    for (const auto& e : j.at("psusy").at("spectrum")) d.push_back(e.at("degeneracy"));
    ASSERT_GE(d.size(), 6u);
    EXPECT_EQ(std::vector<int>(d.begin(), d.begin() + 6), (std::vector<int>{1, 3, 3, 2, 3, 3}));
    EXPECT_EQ(j.at("psusy").at("spectrum")[0].at("energy"), -5.0);
}

TEST(CliSpectrum, TableMentionsEveryMergedLevel) {
    const auto r = run("spectrum " + osc + " --psusy first");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("H1:+1 H2:+0 H3:+0"), std::string::npos);
    EXPECT_NE(r.out.find("c1 = -5"), std::string::npos);
}

TEST(CliSpectrum, ScarfNumericMatchesFourLevels) {
    const auto j = run_json("spectrum " + scarf + " --numeric");
    const auto& rep = j.at("numeric").at("report");
    EXPECT_EQ(rep.at("pairs").size(), 4u);
    EXPECT_TRUE(rep.at("unmatched").empty());
    EXPECT_LT(rep.at("max_abs_delta").get<double>(), 5e-4);
    EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST(CliSpectrum, TightToleranceFailsWithExitOne) {
    const auto r = run("spectrum " + scarf + " --numeric --tol spectrum-delta=1e-12");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(CliSpectrum, CsvRoundTripsTheMergedSpectrum) {
    const auto r = run("spectrum " + pt + " --psusy second --format csv");
    ASSERT_EQ(r.code, 0);
    std::istringstream is(r.out);
    const auto back = io::read_spectrum_csv(is);
    const auto want = triplet_spectrum(build_triplet(PotentialParams::poschl_teller(1.2, 3.9, 0.3), Choice::second), 14);
    ASSERT_EQ(back.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_EQ(back[k].energy, want[k].energy);
        EXPECT_EQ(back[k].degeneracy, want[k].degeneracy);
    }
}

TEST(CliSpectrum, SideFiles) {
    const auto diagram = temp_file("diagram.csv");
    const auto plot = temp_file("plot.csv");
    const auto r = run("spectrum " + scarf + " --psusy first --diagram " + diagram.string() + " --plot +1 --plot-file " + plot.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream d(diagram);
    const auto drows = io::read_csv(d);
    ASSERT_GE(drows.size(), 2u);
    EXPECT_EQ(drows[0], (std::vector<std::string>{"index", "energy", "degeneracy"}));
    std::ifstream p(plot);
    const auto prows = io::read_csv(p);
    ASSERT_GT(prows.size(), 100u);
    EXPECT_EQ(prows[0], (std::vector<std::string>{"x", "re_V", "im_V", "re_psi", "im_psi"}));
    std::filesystem::remove(diagram);
    std::filesystem::remove(plot);
}

TEST(CliInput, MalformedParamsExitTwoNamingTheInvariant) {
    const auto r = run("spectrum --family scarf --A 0.3 --B 1.4", true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("A must exceed B - 1/2"), std::string::npos) << r.out;
}

TEST(CliInput, OtherInvalidInputs) {
    EXPECT_EQ(run("spectrum --family pt --A 1 --B 2").code, 2);                    // missing gamma
    EXPECT_EQ(run("spectrum --family oscillator --alpha 2 --delta 1").code, 2);     // integer tie
    EXPECT_EQ(run("spectrum " + osc + " --gamma 0.3").code, 2);                     // foreign parameter
    EXPECT_EQ(run("spectrum " + osc + " --format xml").code, 2);
    EXPECT_EQ(run("spectrum " + osc + " --bogus").code, 2);
    EXPECT_EQ(run("verify " + osc + " --tol nope=1").code, 2);
    EXPECT_EQ(run("verify " + osc + " --only nope").code, 2);
    EXPECT_EQ(run("verify --family oscillator --alpha 0.75 --delta 1").code, 2);  // first choice needs alpha > 1
    EXPECT_EQ(run("").code, 2);
}

TEST(CliInput, LimitingModeAcceptsIntegerTies) {
    const auto j = run_json("spectrum --family oscillator --alpha 3 --delta 1 --limiting --psusy first");
    EXPECT_EQ(j.at("psusy").at("spectrum")[0].at("energy"), -6.0);
    EXPECT_EQ(j.at("psusy").at("spectrum")[0].at("degeneracy"), 1);
}

TEST(CliHelp, ListsTolerancesAndExitsZero) {
    const auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("quasi-hamiltonian"), std::string::npos);
    EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

TEST(CliVerify, OscillatorSuitePasses) {
    const auto j = run_json("verify " + osc);
    EXPECT_TRUE(j.at("passed").get<bool>());
    std::set<std::string> names;
    for (const auto& c : j.at("checks")) {
        EXPECT_NE(c.at("status"), "FAIL") << c.dump();
        names.insert(c.at("check").get<std::string>());
    }
    EXPECT_EQ(names.size(), 11u);
}

TEST(CliVerify, EveryFamilyAndChoicePasses) {
    for (const auto& fam : {pt, scarf})
        for (const char* ch : {"first", "second"}) EXPECT_EQ(run("verify " + fam + " --choice " + ch).code, 0) << fam << ' ' << ch;
}

TEST(CliVerify, OnlyFilter) {
    const auto j = run_json("verify " + osc + " --only constraint");
    ASSERT_EQ(j.at("checks").size(), 1u);
    EXPECT_EQ(j.at("checks")[0].at("check"), "constraint");
    EXPECT_LT(j.at("checks")[0].at("measured").get<double>(), 1e-10);
}

TEST(CliVerify, CoarseGridReportsConvergenceOrders) {
    const auto r = run("verify " + osc + " --grid-n 200 --format json");
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("grid").at("points"), 200);
    ASSERT_FALSE(j.at("convergence").empty());
    for (const auto& l : j.at("convergence")) {
        const double order = l.at("observed_order");
        EXPECT_NEAR(order, l.at("expected_order").get<double>(), 0.5) << l.dump();
    }
    EXPECT_EQ(r.code, j.at("passed").get<bool>() ? 0 : 1);
}

TEST(CliVerify, FailingCheckExitsOne) {
    const auto r = run("verify " + osc + " --only constraint --tol constraint=1e-30");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("measured"), std::string::npos);
}

TEST(CliSsusyMap, OscillatorConstant) {
    const auto j = run_json("ssusy-map " + osc);
    EXPECT_EQ(j.at("c"), -10.0);  // -4 alpha
    EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST(CliSsusyMap, PoschlTellerChoiceFlip) {
    const auto j = run_json("ssusy-map " + pt + " --choice first");
    EXPECT_EQ(j.at("flipped").at("c").get<double>(), -j.at("c").get<double>());
    EXPECT_EQ(j.at("flipped").at("max_p_change").get<double>(), 0.0);
}

TEST(CliSsusyMap, ScarfSecondConstant) {
    const auto j = run_json("ssusy-map " + scarf + " --choice second --samples 3");
    EXPECT_NEAR(j.at("c").get<double>(), (2.3 + 1.4 - 0.5) * (2.3 - 1.4 + 0.5), 1e-14);
    EXPECT_EQ(j.at("samples").size(), 3u);
}

TEST(CliEigDump, LowestEigenvaluesAsCsv) {
    const auto r = run("eig-dump " + scarf + " --count 4 --format csv");
    ASSERT_EQ(r.code, 0);
    std::istringstream is(r.out);
    const auto rows = io::read_csv(is);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_NEAR(io::parse_double(rows[1][1]), -5.29, 1e-4);
}

TEST(CliEigDump, MatrixEntries) {
    const auto r = run("eig-dump " + osc + " --half-width 2 --grid-n 16 --order 2 --matrix --format csv");
    ASSERT_EQ(r.code, 0);
    std::istringstream is(r.out);
    EXPECT_EQ(io::read_csv(is).size(), 1u + 16u + 2u * 15u);
}

TEST(CliOutput, WritesToFile) {
    const auto path = temp_file("out.json");
    ASSERT_EQ(run("ssusy-map " + osc + " --format json --output " + path.string()).code, 0);
    std::ifstream f(path);
    const auto j = json::parse(f);
    EXPECT_EQ(j.at("command"), "ssusy-map");
    std::filesystem::remove(path);
}

TEST(CliConfig, FileValuesAndOverrides) {
    const std::string cfg = std::string("--config ") + PTSUSY_CONFIG_DIR + "/oscillator.toml";
    const auto j = run_json(cfg + " verify");
    std::set<std::string> names;
    for (const auto& c : j.at("checks")) names.insert(c.at("check").get<std::string>());
    EXPECT_EQ(names, (std::set<std::string>{"constraint", "annihilation", "intertwining"}));
    EXPECT_EQ(j.at("params").at("alpha"), 2.5);
    const auto over = run_json(cfg + " verify --alpha 3.5 --only constraint");
    EXPECT_EQ(over.at("params").at("alpha"), 3.5);
    EXPECT_EQ(over.at("checks").size(), 1u);
    const auto ini = run_json(std::string("--config ") + PTSUSY_CONFIG_DIR + "/scarf.ini spectrum");
    EXPECT_EQ(ini.at("psusy").at("choice"), "second");
}
