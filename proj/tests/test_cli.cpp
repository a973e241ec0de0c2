// Copyright 2026 The radpair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "cli_harness.hpp"

namespace radpair {
namespace {

using testing::read_bytes;
using testing::run_cli;
using testing::shell_quote;

const std::string kExe = RADPAIR_CLI_PATH;
const std::filesystem::path kGolden = RADPAIR_GOLDEN_DIR;

std::string config_arg(const std::filesystem::path& p) { return "--config " + shell_quote(p.string()); }

struct GoldenCase {
    const char* kind;
    const char* name;
};

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, CsvIsByteIdentical) {
    const auto& c = GetParam();
    const auto cfg = kGolden / (std::string(c.name) + ".json");
    const auto run = run_cli(kExe, std::string(c.kind) + " " + config_arg(cfg), c.name);
    ASSERT_EQ(run.exit_code, 0) << run.err;
    const std::string produced = read_bytes(run.dir / (std::string(c.name) + ".csv"));
    const std::string expected = read_bytes(kGolden / (std::string(c.name) + ".csv"));
    ASSERT_FALSE(expected.empty());
    EXPECT_EQ(produced, expected);
    EXPECT_EQ(std::count(run.out.begin(), run.out.end(), '\n'), 1) << run.out;
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden,
                         ::testing::Values(GoldenCase{"evolve", "evolve_one_nucleus"},
                                           GoldenCase{"sweep-hfc", "sweep_hfc_one_nucleus"},
                                           GoldenCase{"sweep-field", "sweep_field_py_dma"},
                                           GoldenCase{"trace-qs", "trace_qs_unitary"},
                                           GoldenCase{"trace-qs", "trace_qs_both"},
                                           GoldenCase{"fit", "fit_one_nucleus"}),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(Cli, SameConfigTwiceIsByteIdentical) {
    const auto cfg = kGolden / "sweep_hfc_one_nucleus.json";
    const auto a = run_cli(kExe, "sweep-hfc " + config_arg(cfg), "twice-a");
    const auto b = run_cli(kExe, "sweep-hfc " + config_arg(cfg), "twice-b");
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_EQ(read_bytes(a.dir / "sweep_hfc_one_nucleus.csv"), read_bytes(b.dir / "sweep_hfc_one_nucleus.csv"));
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, HyperfineSweepStructure) {
    const auto run = run_cli(kExe, "sweep-hfc " + config_arg(kGolden / "sweep_hfc_one_nucleus.json"), "hfc");
    ASSERT_EQ(run.exit_code, 0);
    std::istringstream csv(read_bytes(run.dir / "sweep_hfc_one_nucleus.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("# radpair ", 0), 0u);
    EXPECT_NE(line.find("seed="), std::string::npos);
    EXPECT_NE(line.find("dt_us="), std::string::npos);
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("# model ", 0), 0u);
    std::getline(csv, line);
    EXPECT_EQ(line, "A_rad_per_us,Y_S_quantum,Y_T_quantum,Y_S_phenom,Y_T_phenom,converged");
    std::vector<double> axis;
    while (std::getline(csv, line)) axis.push_back(std::stod(line.substr(0, line.find(','))));
    ASSERT_EQ(axis.size(), 7u);
    for (std::size_t i = 1; i < axis.size(); ++i) EXPECT_GT(axis[i], axis[i - 1]);
}

struct InvalidCase {
    const char* file;
    const char* path;
};

class InvalidConfig : public ::testing::TestWithParam<InvalidCase> {};

TEST_P(InvalidConfig, ExitsTwoNamingKeyPath) {
    const auto& c = GetParam();
    const auto run = run_cli(kExe, "evolve " + config_arg(kGolden / "invalid" / (std::string(c.file) + ".json")),
                             c.file);
    EXPECT_EQ(run.exit_code, 2);
    EXPECT_NE(run.err.find(c.path), std::string::npos) << run.err;
    EXPECT_FALSE(std::filesystem::exists(run.dir / "never.csv"));
}

INSTANTIATE_TEST_SUITE_P(
    Cli, InvalidConfig,
    ::testing::Values(InvalidCase{"both_hyperfine_units", "/model/custom/nuclei/0/A_mT"},
                      InvalidCase{"both_hyperfine_units", "/model/custom/nuclei/0/A_rad_per_us"},
                      InvalidCase{"unknown_key", "/run/t_max"},
                      InvalidCase{"missing_rates", "/rates"},
                      InvalidCase{"unknown_preset", "/model/preset"},
                      InvalidCase{"bad_electron", "/model/custom/nuclei/0/electron"}),
    [](const auto& info) { return std::string(info.param.file) + "_" + std::to_string(info.index); });

TEST(Cli, SubcommandMustMatchRunKind) {
    const auto run = run_cli(kExe, "sweep-field " + config_arg(kGolden / "evolve_one_nucleus.json"), "mismatch");
    EXPECT_EQ(run.exit_code, 2);
    EXPECT_NE(run.err.find("/run/kind"), std::string::npos) << run.err;
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli(kExe, "", "noargs").exit_code, 2);
    EXPECT_EQ(run_cli(kExe, "evolve", "noconfig").exit_code, 2);
    EXPECT_EQ(run_cli(kExe, "walk --config x.json", "badsub").exit_code, 2);
}

TEST(Cli, MissingConfigFileIsIoError) {
    const auto run = run_cli(kExe, "evolve --config /nonexistent/config.json", "nofile");
    EXPECT_EQ(run.exit_code, 4);
    EXPECT_NE(run.err.find("/nonexistent/config.json"), std::string::npos);
}

TEST(Cli, UnwritableOutputIsIoError) {
    const auto dir = testing::scratch_dir("unwritable-cfg");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"model": {"preset": "one-nucleus"}, "theory": "quantum",
      "run": {"kind": "trace-qs", "a_rad_per_us": 4, "t_max_us": 0.01},
      "output": {"path": "/nonexistent-dir/out.csv"}})";
    EXPECT_EQ(run_cli(kExe, "trace-qs " + config_arg(cfg), "unwritable").exit_code, 4);
}

TEST(Cli, NumericsErrorExitsThree) {
    const auto dir = testing::scratch_dir("numerics-cfg");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"model": {"preset": "one-nucleus"}, "theory": "quantum",
      "run": {"kind": "evolve"}, "solver": {"dt_us": 0.5}, "output": {"path": "out.csv"}})";
    const auto run = run_cli(kExe, "evolve " + config_arg(cfg), "numerics");
    EXPECT_EQ(run.exit_code, 3);
    EXPECT_NE(run.err.find("stability"), std::string::npos) << run.err;
}

TEST(Cli, NonConvergentFitWarnsButSucceeds) {
    const auto dir = testing::scratch_dir("warn-cfg");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"model": {"preset": "one-nucleus"}, "theory": "phenomenological",
      "run": {"kind": "fit", "axis": "field_mT", "axis_values": [0.0, 0.3], "observable": "Y_T",
              "synthetic_truth": [5.0], "max_iters": 2, "restarts": 1,
              "free": [{"param": "A_rad_per_us", "lower": 0.5, "upper": 20, "start": 2}]},
      "solver": {"step_fraction": 0.1}, "output": {"path": "fit.csv"}})";
    const auto run = run_cli(kExe, "fit " + config_arg(cfg), "warn");
    EXPECT_EQ(run.exit_code, 0) << run.err;
    EXPECT_EQ(run.out.rfind("warning:", 0), 0u) << run.out;
    EXPECT_NE(read_bytes(run.dir / "fit.csv").find("converged=0"), std::string::npos);
}

TEST(Cli, PresetsListsCatalog) {
    const auto run = run_cli(kExe, "presets", "presets");
    EXPECT_EQ(run.exit_code, 0);
    EXPECT_NE(run.out.find("Py-h10-DMA-h11,1.9,6.7,8.5,4"), std::string::npos) << run.out;
    EXPECT_NE(run.out.find("Py-d10-DMA-h11,0.4,5,12,11.4"), std::string::npos);
    EXPECT_NE(run.out.find("Py-d10-DMA-d11,0.9,4.2,7.9,6"), std::string::npos);
    EXPECT_NE(run.out.find("Py-h10-DMA-d11,1.3,4,3.7,1.8"), std::string::npos);
    EXPECT_NE(run.out.find("one-nucleus"), std::string::npos);
}

}  // namespace
}  // namespace radpair
