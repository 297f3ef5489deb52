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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kedge/cfg.hpp"
#include "kedge/cost_model.hpp"
#include "kedge/policy.hpp"
#include "kedge/trace.hpp"

namespace kedge {

enum class EventKind : std::uint8_t {
    ExecStart,
    ExecEnd,
    DemandMiss,
    DecompStart,
    DecompEnd,
    Delete,
    Evict,
    Patch,
    PreRequest,
};

std::string_view to_string(EventKind kind) noexcept;

struct TimelineEvent {
    Cycles cycle = 0;
    EventKind kind = EventKind::ExecStart;
    BlockId block{};
    Bytes footprint_after = 0;
    /// Patch only: the block whose branch now targets `block`'s copy.
    std::optional<BlockId> source;

    friend bool operator==(const TimelineEvent&, const TimelineEvent&) = default;
};

struct DecompressionCounts {
    std::uint64_t demand = 0;
    std::uint64_t pre = 0;

    std::uint64_t total() const noexcept { return demand + pre; }
    friend bool operator==(const DecompressionCounts&, const DecompressionCounts&) = default;
};

struct Metrics {
    Cycles total_cycles = 0;
    Cycles stall_cycles = 0;
    Cycles background_cycles = 0;  ///< deletions, evictions and branch patching
    DecompressionCounts decompressions;
    std::uint64_t demand_misses = 0;
    std::uint64_t deletions = 0;  ///< k-edge deletions
    std::uint64_t evictions = 0;  ///< cap-driven deletions
    std::uint64_t patches = 0;    ///< branch links plus un-patches
    Bytes peak_footprint = 0;
    double avg_footprint = 0.0;  ///< cycle-weighted over [0, total_cycles]
    Bytes baseline_uncompressed_footprint = 0;
    Cycles baseline_cycles = 0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct RunResult {
    Metrics metrics;
    std::vector<TimelineEvent> timeline;
};

/// Replays `trace` under `policy` with a virtual clock.
///
/// Three logical agents share one event loop:
///  - execution walks the trace. A Compressed block raises a demand miss
///    (exception_cycles, then a demand decompression); an InFlight block is
///    promoted to the head of the decompression queue. Either way execution
///    stalls until the copy is Resident, then runs for exec_cycles. When a
///    block starts, the Compressed blocks within k_pre edges of its exit are
///    requested; when it ends, the k-edge rule deletes stale copies.
///  - decompression is a single server. Demand work goes to the queue head and
///    suspends (not cancels) a speculative job in progress.
///  - compression is bookkeeping only: deletions free space at once and their
///    cost is added to background_cycles, never to the critical path.
///
/// total_cycles == baseline_cycles + stall_cycles + exception_cycles * demand_misses
/// holds for every run.
///
/// Throws ConfigError for an invalid policy, CFG, or trace, and
/// InfeasibleCapError when the cap cannot be honoured.
RunResult run(const Cfg& cfg, const Trace& trace, const PolicyConfig& policy, const CostModel& cost);

struct SweepRow {
    KValue k_compress{1};
    DecompMode mode = DecompMode::OnDemand;
    std::uint32_t k_pre = 1;
    Metrics metrics;
};

/// One run per (mode, k_compress) pair, modes outermost, rows in input order.
/// Other policy fields come from `base`.
std::vector<SweepRow> sweep(const Cfg& cfg, const Trace& trace, const PolicyConfig& base,
                            const CostModel& cost, std::span<const KValue> k_values,
                            std::span<const DecompMode> modes);

/// `cycle,kind,block,footprint_after` with a header line.
std::string timeline_to_csv(std::span<const TimelineEvent> timeline);

/// One JSON object holding exactly the Metrics fields, in declaration order.
std::string metrics_to_json(const Metrics& metrics);

/// Configuration columns followed by flattened metrics columns.
std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace kedge
