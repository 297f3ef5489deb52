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
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "kedge/cfg.hpp"
#include "kedge/cost_model.hpp"

namespace kedge {

enum class Residency : std::uint8_t { Compressed, InFlight, Resident };

const char* to_string(Residency r) noexcept;

/// A branch instruction inside a decompressed copy whose target was patched.
/// `site_index` is the position of the taken edge among the source block's
/// out-edges (sorted by destination).
struct BranchSite {
    BlockId from_block{};
    std::size_t site_index = 0;

    friend auto operator<=>(const BranchSite&, const BranchSite&) = default;
};

struct BlockRuntimeState {
    Residency state = Residency::Compressed;
    Cycles remaining_cycles = 0;  // InFlight only
    std::uint32_t counter = 0;    // Resident only: edges traversed since last execution start
    std::optional<Cycles> last_exec_start;
    std::set<BranchSite> remember_set;
};

struct Eviction {
    BlockId block{};
    std::size_t patches_undone = 0;

    friend bool operator==(const Eviction&, const Eviction&) = default;
};

/// Outcome of request_decompress. `issued` is false when the block was
/// already InFlight or Resident.
struct DecompressRequest {
    BlockId block{};
    bool demand = false;
    bool issued = false;
    Cycles latency = 0;
    std::vector<Eviction> evictions;
};

/// The memory image: a compressed code area that never changes plus a
/// decompressed area holding copies of InFlight and Resident blocks.
///
/// Space for a copy is reserved when its decompression is requested, so
/// footprint() already includes it while it is InFlight. With a cap, every
/// request first evicts least recently started Resident blocks until the new
/// copy fits.
///
/// Holds a non-owning reference to the Cfg, which must outlive it. Copying
/// gives an independent snapshot.
class MemoryState {
public:
    /// All blocks Compressed, clock 0. Throws InfeasibleCapError when the cap
    /// cannot hold the compressed area plus the largest block's copy.
    static MemoryState init_image(const Cfg& cfg, std::optional<Bytes> cap = std::nullopt);

    /// Compressed -> InFlight(decomp_base + decomp_per_byte * csize), after
    /// evicting as needed (never a block in `protect`). A no-op for InFlight
    /// or Resident blocks. Throws InfeasibleCapError without changing state
    /// when eviction cannot make room.
    DecompressRequest request_decompress(BlockId b, const CostModel& cost, bool demand,
                                         std::span<const BlockId> protect = {});

    /// Advances an InFlight block's decompression by `cycles` (<= remaining).
    void progress(BlockId b, Cycles cycles);

    /// InFlight(0) -> Resident with counter 0.
    void complete_decompress(BlockId b);

    /// Records `site` in target's remember set. Returns 1 for a new patch, 0 if
    /// it was already there. Target must be Resident.
    std::size_t link_branch(BranchSite site, BlockId target);

    /// Resident -> Compressed. Returns the number of remembered sites that had
    /// to be un-patched. Sites located in b's own copy disappear with it.
    std::size_t delete_resident(BlockId b);

    /// Deletes Resident blocks outside `protect`, oldest last_exec_start first
    /// (never-executed first, ties by id), until footprint + needed <= cap.
    /// A no-op without a cap.
    std::vector<Eviction> evict_for(Bytes needed, std::span<const BlockId> protect = {});

    /// Whether evict_for(needed, protect) would succeed.
    bool can_make_room(Bytes needed, std::span<const BlockId> protect = {}) const;

    /// Stamps an execution start at the current clock and zeroes the counter.
    void begin_execution(BlockId b);

    /// Adds one to the counter of every Resident block.
    void increment_counters();

    Bytes footprint() const noexcept { return compressed_bytes_ + decompressed_bytes_; }
    Bytes compressed_area_bytes() const noexcept { return compressed_bytes_; }
    Bytes decompressed_area_bytes() const noexcept { return decompressed_bytes_; }
    /// Bytes reserved by InFlight copies.
    Bytes in_flight_bytes() const noexcept;
    std::optional<Bytes> cap() const noexcept { return cap_; }

    Cycles clock() const noexcept { return clock_; }
    void set_clock(Cycles now);

    const BlockRuntimeState& state(BlockId b) const { return blocks_[cfg_->index_of(b)]; }
    Residency residency(BlockId b) const { return state(b).state; }
    std::vector<BlockId> blocks_in(Residency r) const;
    const Cfg& cfg() const noexcept { return *cfg_; }

private:
    explicit MemoryState(const Cfg& cfg, std::optional<Bytes> cap);
    BlockRuntimeState& mut(BlockId b) { return blocks_[cfg_->index_of(b)]; }
    std::vector<BlockId> lru_order(std::span<const BlockId> protect) const;

    const Cfg* cfg_;
    std::vector<BlockRuntimeState> blocks_;
    Bytes compressed_bytes_ = 0;
    Bytes decompressed_bytes_ = 0;
    std::optional<Bytes> cap_;
    Cycles clock_ = 0;
};

}  // namespace kedge
