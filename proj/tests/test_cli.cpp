#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "paraxfem/config.hpp"
#include "paraxfem/csv_report.hpp"
#include "paraxfem/harness.hpp"

using namespace paraxfem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const char* tag) {
    fs::path dir = fs::temp_directory_path() / (std::string("paraxfem_test_") + tag);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(ParseConfig, MinimalConvergeValid) {
    auto cfg = parse_config("[run]\nexperiment = converge\ncase = 1\nlevels = 100,200\n");
    EXPECT_EQ(cfg.experiment, Experiment::Converge);
    EXPECT_EQ(cfg.case_id, 1);
    ASSERT_EQ(cfg.levels.size(), 2u);
    EXPECT_EQ(cfg.levels[0], 100u);
    EXPECT_EQ(cfg.levels[1], 200u);
}

TEST(ParseConfig, NonPositiveStepRejected) {
    try {
        parse_config("[run]\nexperiment = wedge\ndirection = up\nh = 0\n");
        FAIL() << "expected rejection";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line_no, 4);
        EXPECT_NE(std::string(e.what()).find("h must be positive"), std::string::npos);
    }
}

TEST(ParseConfig, DownslopingNeumannAnnotated) {
    auto cfg = parse_config(
        "[run]\nexperiment = wedge\nmodel = N\ndirection = down\nh = 0.01\nsteps = 50\n");
    ASSERT_EQ(cfg.annotations.size(), 1u);
    EXPECT_NE(cfg.annotations[0].find("upsloping"), std::string::npos);
}

TEST(ParseConfig, UnknownKeysAndModelsRejected) {
    EXPECT_THROW(parse_config("[run]\nexperiment = converge\nlevels = 100\nbogus = 3\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[run]\nexperiment = converge\nlevels = 100\nmodel = XX\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[run]\nexperiment = growth\nprofile = z\n"), ConfigError);
    EXPECT_THROW(parse_config("[other]\nexperiment = converge\n"), ConfigError);
    EXPECT_THROW(parse_config("experiment = converge\n"), ConfigError);
    EXPECT_THROW(parse_config("[run]\nexperiment = converge\nlevels = 123\n"), ConfigError);
}

TEST(CsvReport, GrowthHeaderOnlyWhenEmpty) {
    GrowthReport rep;
    rep.profile_id = 'a';
    auto dir = temp_dir("growth_empty");
    const auto path = dir / "growth.csv";
    write_csv(to_csv(rep), path.string());
    EXPECT_EQ(slurp(path), "t,l2_norm,profile\n");
}

TEST(CsvReport, ConvergeRoundTrip) {
    auto report = convergence_study(1, BoundaryMode::NeumannDynamical, {100});
    auto dir = temp_dir("converge_rt");
    const auto path = dir / "converge.csv";
    write_csv(to_csv(report), path.string());
    auto table = read_csv(path.string());
    ASSERT_EQ(table.header, (std::vector<std::string>{"h", "k", "error", "rate"}));
    ASSERT_EQ(table.rows.size(), report.levels.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        EXPECT_EQ(std::stod(table.rows[i][0]), report.levels[i].h);
        EXPECT_EQ(std::stod(table.rows[i][2]), report.levels[i].error); // lossless round-trip
        if (report.levels[i].rate)
            EXPECT_EQ(std::stod(table.rows[i][3]), *report.levels[i].rate);
        else
            EXPECT_TRUE(table.rows[i][3].empty());
    }
}

TEST(CsvReport, WedgeSchemaAndFlagColumn) {
    TransmissionLossSeries s;
    s.model = "AK";
    s.depth_m = 25.0;
    s.range_m = {10.0, 20.0};
    s.tl_db = {31.5, 40.25};
    s.flagged_unstable = true;
    auto dir = temp_dir("wedge_schema");
    const auto path = dir / "wedge.csv";
    write_csv(to_csv(s), path.string());
    auto table = read_csv(path.string());
    ASSERT_EQ(table.header, (std::vector<std::string>{"r_m", "depth_m", "TL_dB", "model", "flag"}));
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_EQ(table.rows[0][4], "unstable");
    EXPECT_EQ(table.rows[1][3], "AK");
}

TEST(CsvReport, DeterministicBytes) {
    auto rep = growth_study('d', 60);
    auto dir = temp_dir("determinism");
    const auto p1 = dir / "a.csv";
    const auto p2 = dir / "b.csv";
    write_csv(to_csv(rep), p1.string());
    write_csv(to_csv(growth_study('d', 60)), p2.string());
    EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(CliBinary, EndToEndGrowthRunAndExitCode) {
    const char* bin = std::getenv("PARAXFEM_BIN");
    if (!bin) GTEST_SKIP() << "PARAXFEM_BIN not set";
    auto dir = temp_dir("cli_e2e");
    const auto cfg_path = dir / "run.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "[run]\nexperiment = growth\nprofile = b\nlevel = 100\n";
    }
    const std::string cmd = std::string(bin) + " growth --config " + cfg_path.string() +
                            " --out " + (dir / "out1").string() + " >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    auto table = read_csv((dir / "out1" / "growth.csv").string());
    EXPECT_EQ(table.header, (std::vector<std::string>{"t", "l2_norm", "profile"}));
    EXPECT_EQ(table.rows.size(), 101u);
    EXPECT_TRUE(fs::exists(dir / "out1" / "manifest.txt"));

    // Identical reruns produce byte-identical reports and manifests.
    const std::string cmd2 = std::string(bin) + " growth --config " + cfg_path.string() +
                             " --out " + (dir / "out2").string() + " >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd2.c_str()), 0);
    EXPECT_EQ(slurp(dir / "out1" / "growth.csv"), slurp(dir / "out2" / "growth.csv"));
    EXPECT_EQ(slurp(dir / "out1" / "manifest.txt"), slurp(dir / "out2" / "manifest.txt"));

    // Invalid config exits nonzero.
    {
        std::ofstream cfg(cfg_path, std::ios::trunc);
        cfg << "[run]\nexperiment = growth\nprofile = q\n";
    }
    EXPECT_NE(std::system(cmd.c_str()), 0);
}
