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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kedge/cfg.hpp"

namespace kedge {

struct ReplayedSource {
    friend bool operator==(const ReplayedSource&, const ReplayedSource&) = default;
};

struct GeneratedSource {
    std::uint64_t seed = 0;
    std::size_t max_steps = 0;
    friend bool operator==(const GeneratedSource&, const GeneratedSource&) = default;
};

using TraceSource = std::variant<ReplayedSource, GeneratedSource>;

/// Ordered sequence of basic-block visits.
struct Trace {
    std::vector<BlockId> steps;
    TraceSource source = ReplayedSource{};

    /// True when the walk did not end at the CFG exit.
    bool truncated(const Cfg& cfg) const noexcept {
        return steps.empty() || steps.back() != cfg.exit();
    }
};

/// Seeded random walk from the entry block.
///
/// Determinism contract: a std::mt19937_64 engine (whose output sequence is
/// fixed by the C++ standard) is seeded with `seed`. At each non-exit block
/// one 64-bit draw x is turned into u = (x >> 11) * 2^-53 in [0, 1), and the
/// first out-edge, in ascending destination id order, whose cumulative
/// probability exceeds u is taken; rounding slack falls to the last edge.
/// The walk stops at the exit block or once it holds `max_steps` blocks.
///
/// Throws ConfigError if `cfg` does not validate or max_steps == 0.
Trace generate_trace(const Cfg& cfg, std::uint64_t seed, std::size_t max_steps);

/// Every violation of the trace invariants against `cfg`, tagged by step index.
ValidationReport validate_trace(const Cfg& cfg, const Trace& trace);

/// One block id per line, '#' comments. The result is a replayed trace.
Trace parse_trace(std::string_view text);
Trace load_trace(const std::string& path);

/// Writes `B<n>` lines; generated traces get a leading metadata comment.
std::string serialize_trace(const Trace& trace);

}  // namespace kedge
