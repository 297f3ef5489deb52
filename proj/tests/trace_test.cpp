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

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace kedge {
namespace {

using testing::B;

// Seeds found by sweeping the generator; they pin its algorithm.
constexpr std::uint64_t kRevisitSeed = 5;
constexpr std::uint64_t kDiamondSeed = 1;

TEST(GenerateTrace, ChainIsForced) {
    Cfg cfg = testing::load_fixture("chain.cfg");
    for (std::uint64_t seed : {0ull, 1ull, 99ull, 0xdeadbeefull}) {
        Trace t = generate_trace(cfg, seed, 10);
        EXPECT_EQ(t.steps, (std::vector<BlockId>{B(0), B(1), B(2)}));
        EXPECT_FALSE(t.truncated(cfg));
    }
}

TEST(GenerateTrace, DiamondPinnedSeed) {
    Cfg cfg = testing::load_fixture("diamond.cfg");
    Trace t = generate_trace(cfg, kDiamondSeed, 10);
    EXPECT_EQ(t.steps, (std::vector<BlockId>{B(0), B(1), B(3)}));
    EXPECT_EQ(std::get<GeneratedSource>(t.source), (GeneratedSource{kDiamondSeed, 10}));
}

TEST(GenerateTrace, RevisitPinnedSeed) {
    Cfg cfg = testing::load_fixture("revisit.cfg");
    Trace t = generate_trace(cfg, kRevisitSeed, 50);
    EXPECT_EQ(t.steps, (std::vector<BlockId>{B(0), B(1), B(0), B(1), B(3)}));
}

TEST(GenerateTrace, TruncatesAtMaxSteps) {
    Cfg cfg = testing::load_fixture("revisit.cfg");
    Trace t = generate_trace(cfg, kRevisitSeed, 3);
    EXPECT_EQ(t.steps, (std::vector<BlockId>{B(0), B(1), B(0)}));
    EXPECT_TRUE(t.truncated(cfg));
    EXPECT_TRUE(validate_trace(cfg, t).ok());
}

TEST(GenerateTrace, RejectsBadInputs) {
    Cfg cfg = testing::load_fixture("chain.cfg");
    EXPECT_THROW(generate_trace(cfg, 1, 0), ConfigError);
    EXPECT_THROW(generate_trace(testing::load_fixture("bad_probs.cfg"), 1, 10), ConfigError);
}

TEST(ValidateTrace, Cases) {
    Cfg cfg = testing::load_fixture("chain.cfg");
    EXPECT_TRUE(validate_trace(cfg, testing::make_trace({0, 1, 2})).ok());

    auto skip = validate_trace(cfg, testing::make_trace({0, 2}));
    ASSERT_EQ(skip.violations.size(), 1u);
    EXPECT_EQ(skip.violations[0].index, 1u);

    auto wrong_start = validate_trace(cfg, testing::make_trace({1, 2}));
    ASSERT_EQ(wrong_start.violations.size(), 1u);
    EXPECT_EQ(wrong_start.violations[0].index, 0u);
    EXPECT_NE(wrong_start.violations[0].message.find("not at entry"), std::string::npos);

    EXPECT_FALSE(validate_trace(cfg, Trace{}).ok());
    auto unknown = validate_trace(cfg, testing::make_trace({0, 1, 7}));
    ASSERT_EQ(unknown.violations.size(), 1u);
    EXPECT_EQ(unknown.violations[0].index, 2u);
}

TEST(TraceFile, WriteAndRead) {
    Cfg cfg = testing::load_fixture("revisit.cfg");
    Trace t = generate_trace(cfg, kRevisitSeed, 50);
    const std::string text = serialize_trace(t);
    EXPECT_EQ(text, "# generated seed=5 max_steps=50\nB0\nB1\nB0\nB1\nB3\n");
    Trace back = parse_trace(text);
    EXPECT_EQ(back.steps, t.steps);
    EXPECT_TRUE(std::holds_alternative<ReplayedSource>(back.source));
    EXPECT_EQ(serialize_trace(back), "B0\nB1\nB0\nB1\nB3\n");
    EXPECT_THROW(parse_trace("B0\nB1 B2\n"), ParseError);
    EXPECT_THROW(parse_trace("B0\nfoo\n"), ParseError);
}

TEST(TraceProperties, ReproducibleAndValid) {
    std::mt19937_64 rng(17);
    for (int g = 0; g < 100; ++g) {
        Cfg cfg = testing::random_cfg(rng, {.max_blocks = 15});
        const std::uint64_t seed = rng();
        Trace a = generate_trace(cfg, seed, 200);
        Trace b = generate_trace(cfg, seed, 200);
        EXPECT_EQ(a.steps, b.steps);
        EXPECT_LE(a.steps.size(), 200u);
        EXPECT_TRUE(validate_trace(cfg, a).ok()) << validate_trace(cfg, a).to_string();
        if (a.steps.size() < 200) EXPECT_EQ(a.steps.back(), cfg.exit());
    }
}

TEST(TraceProperties, BranchFrequenciesConverge) {
    Cfg cfg = testing::load_fixture("diamond.cfg");
    std::size_t left = 0;
    const std::size_t walks = 100'000;
    for (std::size_t s = 0; s < walks; ++s) {
        if (generate_trace(cfg, s, 10).steps[1] == B(1)) ++left;
    }
    const double sigma = std::sqrt(0.25 / walks);
    EXPECT_NEAR(static_cast<double>(left) / walks, 0.5, 3 * sigma);

    // Per-visit branch ratio at the B3 loop head of the nested loops.
    Cfg loops = testing::load_fixture("nested_loops.cfg");
    std::size_t back = 0;
    std::size_t total = 0;
    for (std::uint64_t s = 0; total < 100'000; ++s) {
        Trace t = generate_trace(loops, s, 1000);
        for (std::size_t i = 0; i + 1 < t.steps.size(); ++i) {
            if (t.steps[i] != B(3)) continue;
            ++total;
            if (t.steps[i + 1] == B(1)) ++back;
        }
    }
    const double sigma2 = std::sqrt(0.25 / static_cast<double>(total));
    EXPECT_NEAR(static_cast<double>(back) / static_cast<double>(total), 0.5, 3 * sigma2);
}

}  // namespace
}  // namespace kedge
