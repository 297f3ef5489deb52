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

#include "kedge/policy.hpp"

#include <charconv>

namespace kedge {

std::string to_string(KValue k) {
    return k.is_infinite() ? std::string("inf") : std::to_string(k.value());
}

std::optional<KValue> parse_k_value(std::string_view text) {
    if (text == "inf") return KValue::infinite();
    std::uint32_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || v == 0 || KValue(v).is_infinite()) {
        return std::nullopt;
    }
    return KValue(v);
}

std::string_view to_string(DecompMode mode) noexcept {
    switch (mode) {
        case DecompMode::OnDemand: return "on-demand";
        case DecompMode::PreAll: return "pre-all";
        case DecompMode::PreSingle: return "pre-single";
    }
    return "?";
}

std::optional<DecompMode> parse_decomp_mode(std::string_view text) {
    for (DecompMode m : {DecompMode::OnDemand, DecompMode::PreAll, DecompMode::PreSingle}) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

void PolicyConfig::validate() const {
    if (k_compress.value() == 0) throw ConfigError("k_compress must be >= 1");
    if (mode != DecompMode::OnDemand && k_pre == 0) {
        throw ConfigError(fmt::format("k_pre must be >= 1 for {}", to_string(mode)));
    }
}

void on_block_enter(const PolicyConfig&, MemoryState& mem, BlockId b) { mem.begin_execution(b); }

std::vector<BlockId> advance_counters(const PolicyConfig& policy, MemoryState& mem, BlockId entering) {
    mem.increment_counters();
    std::vector<BlockId> doomed;
    if (policy.k_compress.is_infinite()) return doomed;
    for (BlockId b : mem.blocks_in(Residency::Resident)) {
        if (b != entering && mem.state(b).counter >= policy.k_compress.value()) doomed.push_back(b);
    }
    return doomed;
}

std::vector<DecompressionOrder> predecompress_requests(const PolicyConfig& policy, const Cfg& cfg,
                                                       const MemoryState& mem, BlockId from) {
    std::vector<DecompressionOrder> out;
    if (policy.mode == DecompMode::OnDemand) return out;

    std::vector<Reach> window = k_reach(cfg, from, policy.k_pre);
    std::erase_if(window, [&](const Reach& r) {
        return mem.residency(r.block) != Residency::Compressed;
    });
    if (policy.mode == DecompMode::PreAll) {
        for (const Reach& r : window) out.push_back({r.block, false});
        return out;
    }

    std::optional<BlockId> best;
    double best_p = -1.0;
    for (const Reach& r : window) {
        const double p = hit_probability(cfg, from, r.block, policy.k_pre);
        if (p > best_p || (p == best_p && r.block < *best)) {
            best = r.block;
            best_p = p;
        }
    }
    if (best) out.push_back({*best, false});
    return out;
}

PolicyDecision on_edge_traversal(const PolicyConfig& policy, const Cfg& cfg, MemoryState& mem,
                                 BlockId u, BlockId v) {
    if (!cfg.find_edge(u, v)) throw Error(fmt::format("no edge {} -> {}", u, v));
    PolicyDecision d;
    d.blocks_to_delete = advance_counters(policy, mem, v);
    d.decompress_requests = predecompress_requests(policy, cfg, mem, u);
    return d;
}

PolicyDecision demand_fault(const PolicyConfig&, const MemoryState& mem, BlockId b) {
    if (mem.residency(b) != Residency::Compressed) {
        throw ContractViolation(fmt::format("demand fault on {} which is {}", b,
                                            to_string(mem.residency(b))));
    }
    PolicyDecision d;
    d.decompress_requests.push_back({b, true});
    return d;
}

}  // namespace kedge
