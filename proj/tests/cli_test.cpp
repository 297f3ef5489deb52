// Copyright 2026 The kedge Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "oracles.hpp"

namespace kedge {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::path(::testing::TempDir()) /
               ("kedge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string tmp(const std::string& name) const { return (dir_ / name).string(); }
    static std::string fixture(const std::string& name) { return testing::fixture_path(name); }

    fs::path dir_;
};

TEST_F(CliTest, ValidateExitCodes) {
    auto ok = invoke({"validate", "--cfg", fixture("revisit.cfg")});
    EXPECT_EQ(ok.code, cli::kOk);
    EXPECT_NE(ok.out.find("ok"), std::string::npos);

    auto bad = invoke({"validate", "--cfg", fixture("bad_probs.cfg")});
    EXPECT_EQ(bad.code, cli::kValidationFailed);
    EXPECT_NE(bad.err.find("probabilities sum to 1.1"), std::string::npos) << bad.err;

    EXPECT_EQ(invoke({"validate", "--cfg", tmp("missing.cfg")}).code, cli::kUsageOrIo);
    EXPECT_EQ(invoke({"validate"}).code, cli::kUsageOrIo);
    EXPECT_EQ(invoke({}).code, cli::kUsageOrIo);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsageOrIo);
}

TEST_F(CliTest, GenTraceIsDeterministic) {
    auto a = invoke({"gen-trace", "--cfg", fixture("chain.cfg"), "--seed", "7", "--max-steps", "10",
                     "--out", tmp("a.trace")});
    auto b = invoke({"gen-trace", "--cfg", fixture("chain.cfg"), "--seed", "7", "--max-steps", "10",
                     "--out", tmp("b.trace")});
    ASSERT_EQ(a.code, cli::kOk) << a.err;
    ASSERT_EQ(b.code, cli::kOk) << b.err;
    EXPECT_EQ(slurp(tmp("a.trace")), slurp(tmp("b.trace")));
    EXPECT_EQ(load_trace(tmp("a.trace")).steps, testing::make_trace({0, 1, 2}).steps);

    auto printed = invoke({"gen-trace", "--cfg", fixture("revisit.cfg"), "--seed", "5", "--max-steps", "50"});
    EXPECT_EQ(printed.out, "# generated seed=5 max_steps=50\nB0\nB1\nB0\nB1\nB3\n");

    EXPECT_EQ(invoke({"gen-trace", "--cfg", fixture("bad_probs.cfg"), "--seed", "1", "--max-steps", "5"}).code,
              cli::kValidationFailed);
    EXPECT_EQ(invoke({"gen-trace", "--cfg", fixture("chain.cfg"), "--seed", "1", "--max-steps", "0"}).code,
              cli::kUsageOrIo);
}

TEST_F(CliTest, SimulateRevisitWalk) {
    std::ofstream(tmp("revisit.trace")) << "B0\nB1\nB0\nB1\nB3\n";
    auto r = invoke({"simulate", "--cfg", fixture("revisit.cfg"), "--trace", tmp("revisit.trace"),
                     "--k-compress", "2", "--mode", "on-demand", "--decomp-base", "10",
                     "--exception-cycles", "5", "--metrics-out", tmp("m.json"), "--timeline-out",
                     tmp("t.csv")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    const std::string json = slurp(tmp("m.json"));
    EXPECT_NE(json.find("\"demand_misses\": 3,"), std::string::npos) << json;
    EXPECT_NE(json.find("\"deletions\": 1,"), std::string::npos) << json;
    const std::string csv = slurp(tmp("t.csv"));
    EXPECT_EQ(csv.rfind("cycle,kind,block,footprint_after\n", 0), 0u);
    EXPECT_NE(csv.find(",Delete,B0,"), std::string::npos);
}

TEST_F(CliTest, SimulateZeroCostAndGenerated) {
    auto r = invoke({"simulate", "--cfg", fixture("nested_loops.cfg"), "--seed", "3", "--max-steps", "100",
                     "--mode", "pre-all", "--k-pre", "2"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("\"stall_cycles\": 0,"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateErrors) {
    const std::string cfg = fixture("revisit.cfg");
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--seed", "5", "--max-steps", "9", "--cap", "200"}).code,
              cli::kInfeasible);
    // Neither or both trace sources.
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg}).code, cli::kUsageOrIo);
    std::ofstream(tmp("t")) << "B0\nB3\n";
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--trace", tmp("t"), "--seed", "1", "--max-steps", "3"}).code,
              cli::kUsageOrIo);
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--trace", tmp("t")}).code, cli::kValidationFailed);
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--trace", tmp("nope")}).code, cli::kUsageOrIo);
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--seed", "1", "--max-steps", "3", "--k-compress", "0"}).code,
              cli::kUsageOrIo);
    EXPECT_EQ(invoke({"simulate", "--cfg", cfg, "--seed", "1", "--max-steps", "3", "--mode", "eager"}).code,
              cli::kUsageOrIo);
}

TEST_F(CliTest, SweepRows) {
    auto r = invoke({"sweep", "--cfg", fixture("nested_loops.cfg"), "--seed", "11", "--max-steps", "300",
                     "--k-values", "1,2,inf", "--decomp-base", "20"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("k_compress,mode,k_pre,", 0), 0u);
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].rfind("1,on-demand,", 0), 0u);
    EXPECT_EQ(rows[2].rfind("inf,on-demand,", 0), 0u);

    auto modes = invoke({"sweep", "--cfg", fixture("chain.cfg"), "--seed", "0", "--max-steps", "10",
                         "--k-values", "2", "--modes", "on-demand,pre-all", "--decomp-base", "5",
                         "--out", tmp("s.csv")});
    ASSERT_EQ(modes.code, cli::kOk) << modes.err;
    std::istringstream table(slurp(tmp("s.csv")));
    std::vector<Cycles> stalls;
    std::getline(table, line);
    while (std::getline(table, line)) {
        std::istringstream cells(line);
        std::string cell;
        for (int column = 0; column <= 4; ++column) std::getline(cells, cell, ',');
        stalls.push_back(std::stoull(cell));  // stall_cycles
    }
    ASSERT_EQ(stalls.size(), 2u);
    EXPECT_EQ(stalls[0], 15u);
    EXPECT_LE(stalls[1], stalls[0]);
}

TEST_F(CliTest, SweepUsageErrors) {
    const std::string cfg = fixture("chain.cfg");
    EXPECT_EQ(invoke({"sweep", "--cfg", cfg, "--seed", "0", "--max-steps", "5"}).code, cli::kUsageOrIo);
    EXPECT_EQ(invoke({"sweep", "--cfg", cfg, "--seed", "0", "--max-steps", "5", "--k-values", ""}).code,
              cli::kUsageOrIo);
    EXPECT_EQ(invoke({"sweep", "--cfg", cfg, "--seed", "0", "--max-steps", "5", "--k-values", "1,x"}).code,
              cli::kUsageOrIo);
}

TEST_F(CliTest, ExecutableReportsExitCodes) {
    auto status = [](const std::string& command) {
        const int raw = std::system((command + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    const std::string exe = KEDGE_CLI_PATH;
    EXPECT_EQ(status(exe + " validate --cfg " + fixture("revisit.cfg")), 0);
    EXPECT_EQ(status(exe + " validate --cfg " + fixture("bad_probs.cfg")), 1);
    EXPECT_EQ(status(exe + " validate --cfg " + tmp("missing")), 2);
    EXPECT_EQ(status(exe + " simulate --cfg " + fixture("revisit.cfg") + " --seed 1 --max-steps 4 --cap 10"), 3);
}

}  // namespace
}  // namespace kedge
