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

#include <benchmark/benchmark.h>

#include <random>

#include "kedge/kedge.hpp"

namespace {

using kedge::BlockId;

// A ladder of n blocks where each block falls through or loops back one step.
kedge::Cfg ladder(std::uint32_t n) {
    std::vector<kedge::BasicBlock> blocks;
    std::vector<kedge::Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        blocks.push_back({BlockId{i}, 256, 128, 40});
        if (i + 1 == n) break;
        if (i == 0) {
            edges.push_back({BlockId{0}, BlockId{1}, 1.0});
        } else {
            edges.push_back({BlockId{i}, BlockId{i - 1}, 0.3});
            edges.push_back({BlockId{i}, BlockId{i + 1}, 0.7});
        }
    }
    return kedge::Cfg(std::move(blocks), std::move(edges), BlockId{0}, BlockId{n - 1});
}

void BM_Run(benchmark::State& state) {
    const kedge::Cfg cfg = ladder(static_cast<std::uint32_t>(state.range(0)));
    const kedge::Trace trace = kedge::generate_trace(cfg, 1, 20000);
    kedge::PolicyConfig policy;
    policy.k_compress = kedge::KValue(4);
    policy.mode = static_cast<kedge::DecompMode>(state.range(1));
    policy.k_pre = 2;
    kedge::CostModel cost;
    cost.decomp_base = 30;
    cost.decomp_per_byte = 1;
    cost.exception_cycles = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kedge::run(cfg, trace, policy, cost));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.steps.size()));
}
BENCHMARK(BM_Run)->ArgsProduct({{16, 256}, {0, 1, 2}});

void BM_HitProbability(benchmark::State& state) {
    const kedge::Cfg cfg = ladder(256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kedge::hit_probability(cfg, BlockId{100}, BlockId{104}, state.range(0)));
    }
}
BENCHMARK(BM_HitProbability)->Arg(2)->Arg(8)->Arg(32);

void BM_GenerateTrace(benchmark::State& state) {
    const kedge::Cfg cfg = ladder(256);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kedge::generate_trace(cfg, ++seed, 10000));
    }
}
BENCHMARK(BM_GenerateTrace);

}  // namespace

BENCHMARK_MAIN();
