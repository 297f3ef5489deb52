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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kedge/types.hpp"

namespace kedge {

struct BasicBlock {
    BlockId id{};
    Bytes uncompressed_size = 0;
    Bytes compressed_size = 0;
    Cycles exec_cycles = 0;

    friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

struct Edge {
    BlockId src{};
    BlockId dst{};
    double prob = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Control flow graph of basic blocks with designated entry and exit.
///
/// Construction checks only what is needed to index the graph (unique ids,
/// edges and entry/exit naming existing blocks). Everything else is left to
/// validate_cfg so that broken graphs can still be inspected and reported.
/// Immutable once built.
class Cfg {
public:
    Cfg(std::vector<BasicBlock> blocks, std::vector<Edge> edges, BlockId entry, BlockId exit);

    BlockId entry() const noexcept { return entry_; }
    BlockId exit() const noexcept { return exit_; }

    /// Blocks sorted by id.
    std::span<const BasicBlock> blocks() const noexcept { return blocks_; }
    /// Edges in declaration order.
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::size_t size() const noexcept { return blocks_.size(); }
    bool contains(BlockId id) const noexcept { return index_.contains(id); }

    /// Dense position of `id` in blocks(); throws UnknownBlockError.
    std::size_t index_of(BlockId id) const;
    const BasicBlock& block(BlockId id) const { return blocks_[index_of(id)]; }

    /// Out-edges of `id` sorted by destination id.
    std::span<const Edge> out_edges(BlockId id) const;

    /// Edge (src, dst), or nullopt. With parallel edges the first is returned.
    std::optional<Edge> find_edge(BlockId src, BlockId dst) const;

    /// Position of the (src, dst) edge among out_edges(src).
    std::optional<std::size_t> out_edge_ordinal(BlockId src, BlockId dst) const;

    Bytes total_compressed_size() const noexcept { return compressed_total_; }
    Bytes total_uncompressed_size() const noexcept { return uncompressed_total_; }
    Bytes max_uncompressed_size() const noexcept { return max_uncompressed_; }

private:
    std::vector<BasicBlock> blocks_;
    std::vector<Edge> edges_;
    BlockId entry_;
    BlockId exit_;
    std::unordered_map<BlockId, std::size_t> index_;
    std::vector<std::vector<Edge>> succ_;
    Bytes compressed_total_ = 0;
    Bytes uncompressed_total_ = 0;
    Bytes max_uncompressed_ = 0;
};

struct Violation {
    std::string message;
    std::optional<BlockId> block;
    /// Position in a trace, for trace violations.
    std::optional<std::size_t> index;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

/// Probability sums of non-exit blocks must be within this of 1.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Parses the line-oriented CFG text format:
///
///     block <id> usize=<bytes> csize=<bytes> cycles=<n>
///     edge <src> -> <dst> p=<decimal>
///     entry <id>
///     exit <id>
///     probabilities uniform      # optional; edges may then omit p=
///
/// '#' starts a comment. Throws ParseError on syntax errors, duplicate ids,
/// and references to undeclared blocks.
Cfg parse_cfg(std::string_view text);

/// Reads and parses a file; I/O failures throw kedge::Error.
Cfg load_cfg(const std::string& path);

/// Canonical form: blocks by id, edges by (src, dst), then entry and exit.
std::string serialize_cfg(const Cfg& cfg);

/// Lists every structural violation; never short-circuits.
ValidationReport validate_cfg(const Cfg& cfg);

struct Reach {
    BlockId block{};
    std::size_t distance = 0;

    friend bool operator==(const Reach&, const Reach&) = default;
};

/// Blocks whose shortest edge distance from the exit of `from` is in [1, k].
/// Direct successors are at distance 1; `from` appears only when it lies on a
/// cycle of length <= k. Sorted by (distance, id).
std::vector<Reach> k_reach(const Cfg& cfg, BlockId from, std::size_t k);

/// Probability that a walk leaving `from` along its out-edges first reaches
/// `target` within k edges. The walk is absorbed at `target`.
double hit_probability(const Cfg& cfg, BlockId from, BlockId target, std::size_t k);

}  // namespace kedge
