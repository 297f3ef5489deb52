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

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kedge/cfg.hpp"
#include "kedge/memory.hpp"

namespace kedge {

/// Edge budget of the k-edge rule; may be infinite ("never").
class KValue {
public:
    constexpr explicit KValue(std::uint32_t k) noexcept : k_(k) {}
    static constexpr KValue infinite() noexcept { return KValue(kInfinite); }

    constexpr bool is_infinite() const noexcept { return k_ == kInfinite; }
    constexpr std::uint32_t value() const noexcept { return k_; }

    friend constexpr auto operator<=>(KValue, KValue) = default;

private:
    static constexpr std::uint32_t kInfinite = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t k_;
};

/// "inf" or the decimal value.
std::string to_string(KValue k);
/// Accepts "inf" or a positive integer.
std::optional<KValue> parse_k_value(std::string_view text);

enum class DecompMode : std::uint8_t { OnDemand, PreAll, PreSingle };

/// "on-demand", "pre-all", "pre-single".
std::string_view to_string(DecompMode mode) noexcept;
std::optional<DecompMode> parse_decomp_mode(std::string_view text);

enum class Predictor : std::uint8_t { HitProbability };

struct PolicyConfig {
    KValue k_compress{2};
    DecompMode mode = DecompMode::OnDemand;
    std::uint32_t k_pre = 1;
    Predictor predictor = Predictor::HitProbability;
    std::optional<Bytes> cap;

    /// Throws ConfigError for k_compress == 0, or k_pre == 0 outside OnDemand.
    void validate() const;
};

struct DecompressionOrder {
    BlockId block{};
    bool demand = false;

    friend bool operator==(const DecompressionOrder&, const DecompressionOrder&) = default;
};

struct PolicyDecision {
    std::vector<BlockId> blocks_to_delete;
    std::vector<DecompressionOrder> decompress_requests;
};

/// Execution of `b` begins: its k-edge counter restarts from zero.
void on_block_enter(const PolicyConfig& policy, MemoryState& mem, BlockId b);

/// The k-edge compression half of a traversal into `entering`: every Resident
/// counter goes up by one and the blocks whose counter reached k_compress are
/// returned in id order, except `entering` itself. Nothing is deleted here.
std::vector<BlockId> advance_counters(const PolicyConfig& policy, MemoryState& mem, BlockId entering);

/// Pre-decompression candidates for the window of `from`: Compressed blocks
/// within k_pre edges of its exit. PreAll returns all of them ordered by
/// (distance, id); PreSingle returns the one with the highest hit probability
/// within k_pre (ties to the smaller id); OnDemand returns nothing.
std::vector<DecompressionOrder> predecompress_requests(const PolicyConfig& policy, const Cfg& cfg,
                                                       const MemoryState& mem, BlockId from);

/// Full decision for traversing u -> v: advance_counters(v) plus the
/// pre-decompression window of u. Throws Error if the edge does not exist.
PolicyDecision on_edge_traversal(const PolicyConfig& policy, const Cfg& cfg, MemoryState& mem,
                                 BlockId u, BlockId v);

/// Execution reached a Compressed block: request it with demand priority.
PolicyDecision demand_fault(const PolicyConfig& policy, const MemoryState& mem, BlockId b);

}  // namespace kedge
