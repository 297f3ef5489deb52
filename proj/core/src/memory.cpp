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

#include "kedge/memory.hpp"

#include <algorithm>
#include <tuple>

namespace kedge {

const char* to_string(Residency r) noexcept {
    switch (r) {
        case Residency::Compressed: return "Compressed";
        case Residency::InFlight: return "InFlight";
        case Residency::Resident: return "Resident";
    }
    return "?";
}

namespace {

bool is_protected(std::span<const BlockId> protect, BlockId b) {
    return std::find(protect.begin(), protect.end(), b) != protect.end();
}

}  // namespace

MemoryState::MemoryState(const Cfg& cfg, std::optional<Bytes> cap)
    : cfg_(&cfg), blocks_(cfg.size()), compressed_bytes_(cfg.total_compressed_size()), cap_(cap) {}

MemoryState MemoryState::init_image(const Cfg& cfg, std::optional<Bytes> cap) {
    if (cap && cfg.size() > 0) {
        const Bytes needed = cfg.total_compressed_size() + cfg.max_uncompressed_size();
        if (*cap < needed) {
            auto largest = std::max_element(
                cfg.blocks().begin(), cfg.blocks().end(),
                [](const BasicBlock& a, const BasicBlock& b) {
                    return a.uncompressed_size < b.uncompressed_size;
                });
            throw InfeasibleCapError(fmt::format(
                "cap {} is below {} (compressed area {} + copy of block {} with usize {})", *cap,
                needed, cfg.total_compressed_size(), largest->id, largest->uncompressed_size));
        }
    }
    return MemoryState(cfg, cap);
}

Bytes MemoryState::in_flight_bytes() const noexcept {
    Bytes total = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].state == Residency::InFlight) total += cfg_->blocks()[i].uncompressed_size;
    }
    return total;
}

void MemoryState::set_clock(Cycles now) {
    if (now < clock_) {
        throw ContractViolation(fmt::format("clock moved backwards ({} -> {})", clock_, now));
    }
    clock_ = now;
}

std::vector<BlockId> MemoryState::blocks_in(Residency r) const {
    std::vector<BlockId> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].state == r) out.push_back(cfg_->blocks()[i].id);
    }
    return out;
}

DecompressRequest MemoryState::request_decompress(BlockId b, const CostModel& cost, bool demand,
                                                  std::span<const BlockId> protect) {
    DecompressRequest req;
    req.block = b;
    req.demand = demand;
    const BasicBlock& info = cfg_->block(b);
    if (state(b).state != Residency::Compressed) return req;

    req.evictions = evict_for(info.uncompressed_size, protect);
    BlockRuntimeState& s = mut(b);
    s.state = Residency::InFlight;
    s.remaining_cycles = cost.decompression_latency(info.compressed_size);
    s.counter = 0;
    decompressed_bytes_ += info.uncompressed_size;
    req.issued = true;
    req.latency = s.remaining_cycles;
    return req;
}

void MemoryState::progress(BlockId b, Cycles cycles) {
    BlockRuntimeState& s = mut(b);
    if (s.state != Residency::InFlight) {
        throw ContractViolation(fmt::format("progress on {} which is {}", b, to_string(s.state)));
    }
    if (cycles > s.remaining_cycles) {
        throw ContractViolation(fmt::format("progress of {} cycles on {} with {} remaining", cycles,
                                            b, s.remaining_cycles));
    }
    s.remaining_cycles -= cycles;
}

void MemoryState::complete_decompress(BlockId b) {
    BlockRuntimeState& s = mut(b);
    if (s.state != Residency::InFlight) {
        throw ContractViolation(fmt::format("complete_decompress on {} which is {}", b,
                                            to_string(s.state)));
    }
    if (s.remaining_cycles != 0) {
        throw ContractViolation(fmt::format("complete_decompress on {} with {} cycles remaining", b,
                                            s.remaining_cycles));
    }
    s.state = Residency::Resident;
    s.counter = 0;
}

std::size_t MemoryState::link_branch(BranchSite site, BlockId target) {
    cfg_->index_of(site.from_block);
    BlockRuntimeState& s = mut(target);
    if (s.state != Residency::Resident) {
        throw ContractViolation(fmt::format("link_branch to {} which is {}", target,
                                            to_string(s.state)));
    }
    return s.remember_set.insert(site).second ? 1 : 0;
}

std::size_t MemoryState::delete_resident(BlockId b) {
    BlockRuntimeState& s = mut(b);
    if (s.state != Residency::Resident) {
        throw ContractViolation(fmt::format("delete_resident on {} which is {}", b,
                                            to_string(s.state)));
    }
    const std::size_t undone = s.remember_set.size();
    s.remember_set.clear();
    s.state = Residency::Compressed;
    s.counter = 0;
    decompressed_bytes_ -= cfg_->block(b).uncompressed_size;

    for (BlockRuntimeState& other : blocks_) {
        std::erase_if(other.remember_set,
                      [b](const BranchSite& site) { return site.from_block == b; });
    }
    return undone;
}

std::vector<BlockId> MemoryState::lru_order(std::span<const BlockId> protect) const {
    std::vector<BlockId> candidates;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        BlockId id = cfg_->blocks()[i].id;
        if (blocks_[i].state == Residency::Resident && !is_protected(protect, id)) {
            candidates.push_back(id);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [this](BlockId a, BlockId b) {
        const auto& sa = state(a);
        const auto& sb = state(b);
        // nullopt compares below any timestamp
        return std::tie(sa.last_exec_start, a) < std::tie(sb.last_exec_start, b);
    });
    return candidates;
}

bool MemoryState::can_make_room(Bytes needed, std::span<const BlockId> protect) const {
    if (!cap_) return true;
    Bytes reclaimable = 0;
    for (BlockId id : lru_order(protect)) reclaimable += cfg_->block(id).uncompressed_size;
    return footprint() + needed <= *cap_ + reclaimable;
}

std::vector<Eviction> MemoryState::evict_for(Bytes needed, std::span<const BlockId> protect) {
    std::vector<Eviction> evicted;
    if (!cap_) return evicted;
    if (!can_make_room(needed, protect)) {
        throw InfeasibleCapError(fmt::format(
            "cap {} cannot fit {} more bytes: footprint {} and nothing else is evictable", *cap_,
            needed, footprint()));
    }
    for (BlockId victim : lru_order(protect)) {
        if (footprint() + needed <= *cap_) break;
        evicted.push_back({victim, delete_resident(victim)});
    }
    return evicted;
}

void MemoryState::begin_execution(BlockId b) {
    BlockRuntimeState& s = mut(b);
    if (s.state != Residency::Resident) {
        throw ContractViolation(fmt::format("block {} cannot execute while {}", b,
                                            to_string(s.state)));
    }
    s.counter = 0;
    s.last_exec_start = clock_;
}

void MemoryState::increment_counters() {
    for (BlockRuntimeState& s : blocks_) {
        if (s.state == Residency::Resident) ++s.counter;
    }
}

}  // namespace kedge
