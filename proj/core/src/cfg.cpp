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

#include "kedge/cfg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace kedge {

Cfg::Cfg(std::vector<BasicBlock> blocks, std::vector<Edge> edges, BlockId entry, BlockId exit)
    : blocks_(std::move(blocks)), edges_(std::move(edges)), entry_(entry), exit_(exit) {
    std::sort(blocks_.begin(), blocks_.end(),
              [](const BasicBlock& a, const BasicBlock& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (!index_.emplace(blocks_[i].id, i).second) {
            throw Error(fmt::format("duplicate block id {}", blocks_[i].id));
        }
        compressed_total_ += blocks_[i].compressed_size;
        uncompressed_total_ += blocks_[i].uncompressed_size;
        max_uncompressed_ = std::max(max_uncompressed_, blocks_[i].uncompressed_size);
    }
    if (!contains(entry_)) throw UnknownBlockError(entry_);
    if (!contains(exit_)) throw UnknownBlockError(exit_);

    succ_.resize(blocks_.size());
    for (const Edge& e : edges_) {
        if (!contains(e.src)) throw UnknownBlockError(e.src);
        if (!contains(e.dst)) throw UnknownBlockError(e.dst);
        succ_[index_.at(e.src)].push_back(e);
    }
    for (auto& out : succ_) {
        std::stable_sort(out.begin(), out.end(),
                         [](const Edge& a, const Edge& b) { return a.dst < b.dst; });
    }
}

std::size_t Cfg::index_of(BlockId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownBlockError(id);
    return it->second;
}

std::span<const Edge> Cfg::out_edges(BlockId id) const { return succ_[index_of(id)]; }

std::optional<Edge> Cfg::find_edge(BlockId src, BlockId dst) const {
    for (const Edge& e : out_edges(src)) {
        if (e.dst == dst) return e;
    }
    return std::nullopt;
}

std::optional<std::size_t> Cfg::out_edge_ordinal(BlockId src, BlockId dst) const {
    auto out = out_edges(src);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].dst == dst) return i;
    }
    return std::nullopt;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok\n";
    std::string out;
    for (const Violation& v : violations) {
        if (v.index) out += fmt::format("step {}: ", *v.index);
        out += v.message;
        out += '\n';
    }
    return out;
}

namespace {

struct PendingEdge {
    std::size_t line;
    BlockId src;
    BlockId dst;
    std::optional<double> prob;
};

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(line, fmt::format("invalid {} '{}'", what, text));
    }
    return value;
}

BlockId parse_id(std::string_view token, std::size_t line) {
    auto id = parse_block_id(token);
    if (!id) throw ParseError(line, fmt::format("invalid block id '{}'", token));
    return *id;
}

// Splits `key=value`; throws if the token is not of that shape or the key differs.
std::string_view expect_field(std::string_view token, std::string_view key, std::size_t line) {
    auto eq = token.find('=');
    if (eq == std::string_view::npos || token.substr(0, eq) != key) {
        throw ParseError(line, fmt::format("expected {}=<value>, got '{}'", key, token));
    }
    return token.substr(eq + 1);
}

}  // namespace

Cfg parse_cfg(std::string_view text) {
    std::vector<BasicBlock> blocks;
    std::map<BlockId, std::size_t> declared;  // id -> line
    std::vector<PendingEdge> pending;
    std::optional<std::pair<BlockId, std::size_t>> entry;
    std::optional<std::pair<BlockId, std::size_t>> exit;
    bool uniform = false;

    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        auto tok = detail::tokenize(detail::strip_comment(line));
        if (tok.empty()) continue;
        const std::string_view kw = tok[0];

        if (kw == "block") {
            if (tok.size() != 5) {
                throw ParseError(line_no,
                                 "expected 'block <id> usize=<bytes> csize=<bytes> cycles=<n>'");
            }
            BasicBlock b;
            b.id = parse_id(tok[1], line_no);
            b.uncompressed_size =
                parse_number<Bytes>(expect_field(tok[2], "usize", line_no), line_no, "usize");
            b.compressed_size =
                parse_number<Bytes>(expect_field(tok[3], "csize", line_no), line_no, "csize");
            b.exec_cycles =
                parse_number<Cycles>(expect_field(tok[4], "cycles", line_no), line_no, "cycles");
            if (auto [it, fresh] = declared.emplace(b.id, line_no); !fresh) {
                throw ParseError(line_no, fmt::format("duplicate block id {} (first declared on line {})",
                                                      b.id, it->second));
            }
            blocks.push_back(b);
        } else if (kw == "edge") {
            if ((tok.size() != 4 && tok.size() != 5) || tok[2] != "->") {
                throw ParseError(line_no, "expected 'edge <src> -> <dst> p=<decimal>'");
            }
            PendingEdge e{line_no, parse_id(tok[1], line_no), parse_id(tok[3], line_no), std::nullopt};
            if (tok.size() == 5) {
                e.prob = parse_number<double>(expect_field(tok[4], "p", line_no), line_no, "probability");
            }
            pending.push_back(e);
        } else if (kw == "entry" || kw == "exit") {
            if (tok.size() != 2) throw ParseError(line_no, fmt::format("expected '{} <id>'", kw));
            auto& slot = kw == "entry" ? entry : exit;
            if (slot) {
                throw ParseError(line_no, fmt::format("'{}' given twice (first on line {})", kw,
                                                      slot->second));
            }
            slot.emplace(parse_id(tok[1], line_no), line_no);
        } else if (kw == "probabilities") {
            if (tok.size() != 2 || tok[1] != "uniform") {
                throw ParseError(line_no, "expected 'probabilities uniform'");
            }
            uniform = true;
        } else {
            throw ParseError(line_no, fmt::format("unknown directive '{}'", kw));
        }
    }

    if (!entry) throw ParseError(0, "missing 'entry' line");
    if (!exit) throw ParseError(0, "missing 'exit' line");
    for (const auto& [id, line] : {*entry, *exit}) {
        if (!declared.contains(id)) {
            throw ParseError(line, fmt::format("unknown block {}", id));
        }
    }

    std::map<BlockId, std::size_t> out_degree;
    for (const PendingEdge& e : pending) {
        for (BlockId id : {e.src, e.dst}) {
            if (!declared.contains(id)) {
                throw ParseError(e.line, fmt::format("edge references unknown block {}", id));
            }
        }
        if (!e.prob && !uniform) {
            throw ParseError(e.line, "edge is missing p=<decimal> (no 'probabilities uniform' flag)");
        }
        ++out_degree[e.src];
    }

    std::vector<Edge> edges;
    edges.reserve(pending.size());
    for (const PendingEdge& e : pending) {
        double p = e.prob ? *e.prob : 1.0 / static_cast<double>(out_degree[e.src]);
        edges.push_back({e.src, e.dst, p});
    }
    return Cfg(std::move(blocks), std::move(edges), entry->first, exit->first);
}

Cfg load_cfg(const std::string& path) { return parse_cfg(detail::read_file(path)); }

std::string serialize_cfg(const Cfg& cfg) {
    std::string out;
    for (const BasicBlock& b : cfg.blocks()) {
        out += fmt::format("block {} usize={} csize={} cycles={}\n", b.id, b.uncompressed_size,
                           b.compressed_size, b.exec_cycles);
    }
    std::vector<Edge> edges(cfg.edges().begin(), cfg.edges().end());
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    for (const Edge& e : edges) {
        out += fmt::format("edge {} -> {} p={}\n", e.src, e.dst, detail::format_double(e.prob));
    }
    out += fmt::format("entry {}\nexit {}\n", cfg.entry(), cfg.exit());
    return out;
}

ValidationReport validate_cfg(const Cfg& cfg) {
    ValidationReport report;
    auto add = [&](std::optional<BlockId> id, std::string msg) {
        report.violations.push_back({std::move(msg), id, std::nullopt});
    };

    for (const BasicBlock& b : cfg.blocks()) {
        if (b.uncompressed_size == 0) add(b.id, fmt::format("block {}: usize must be > 0", b.id));
        if (b.compressed_size == 0) add(b.id, fmt::format("block {}: csize must be > 0", b.id));
        if (b.exec_cycles == 0) add(b.id, fmt::format("block {}: cycles must be > 0", b.id));
        if (b.compressed_size > b.uncompressed_size) {
            add(b.id, fmt::format("block {}: csize {} exceeds usize {}", b.id, b.compressed_size,
                                  b.uncompressed_size));
        }
    }

    if (cfg.entry() == cfg.exit() && cfg.size() > 1) {
        add(cfg.entry(), fmt::format("entry and exit are both {} in a {}-block CFG", cfg.entry(),
                                     cfg.size()));
    }

    std::set<std::pair<BlockId, BlockId>> seen;
    for (const Edge& e : cfg.edges()) {
        if (!(e.prob > 0.0 && e.prob <= 1.0)) {
            add(e.src, fmt::format("edge {} -> {}: probability {} outside (0, 1]", e.src, e.dst,
                                   detail::format_double(e.prob)));
        }
        if (!seen.emplace(e.src, e.dst).second) {
            add(e.src, fmt::format("parallel edge {} -> {}", e.src, e.dst));
        }
    }

    for (const BasicBlock& b : cfg.blocks()) {
        auto out = cfg.out_edges(b.id);
        if (b.id == cfg.exit()) {
            if (!out.empty()) {
                add(b.id, fmt::format("exit block {} has {} out-edge(s)", b.id, out.size()));
            }
            continue;
        }
        if (out.empty()) {
            add(b.id, fmt::format("block {} has no out-edges and is not the exit", b.id));
            continue;
        }
        double sum = 0.0;
        for (const Edge& e : out) sum += e.prob;
        if (std::abs(sum - 1.0) > kProbabilityTolerance) {
            add(b.id, fmt::format("block {}: probabilities sum to {:.12g} ≠ 1", b.id, sum));
        }
    }

    std::vector<bool> reached(cfg.size(), false);
    std::vector<BlockId> stack{cfg.entry()};
    reached[cfg.index_of(cfg.entry())] = true;
    while (!stack.empty()) {
        BlockId u = stack.back();
        stack.pop_back();
        for (const Edge& e : cfg.out_edges(u)) {
            auto i = cfg.index_of(e.dst);
            if (!reached[i]) {
                reached[i] = true;
                stack.push_back(e.dst);
            }
        }
    }
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (!reached[i]) {
            BlockId id = cfg.blocks()[i].id;
            add(id, fmt::format("block {} is unreachable from entry {}", id, cfg.entry()));
        }
    }
    return report;
}

std::vector<Reach> k_reach(const Cfg& cfg, BlockId from, std::size_t k) {
    std::vector<Reach> result;
    if (k == 0) {
        cfg.index_of(from);
        return result;
    }
    // BFS seeded with the successors of `from`; `from` itself is not marked,
    // so it is found again only through a cycle.
    std::vector<std::size_t> dist(cfg.size(), 0);
    std::queue<BlockId> frontier;
    for (const Edge& e : cfg.out_edges(from)) {
        auto i = cfg.index_of(e.dst);
        if (dist[i] == 0) {
            dist[i] = 1;
            frontier.push(e.dst);
        }
    }
    while (!frontier.empty()) {
        BlockId u = frontier.front();
        frontier.pop();
        const std::size_t d = dist[cfg.index_of(u)];
        result.push_back({u, d});
        if (d == k) continue;
        for (const Edge& e : cfg.out_edges(u)) {
            auto i = cfg.index_of(e.dst);
            if (dist[i] == 0) {
                dist[i] = d + 1;
                frontier.push(e.dst);
            }
        }
    }
    std::sort(result.begin(), result.end(), [](const Reach& a, const Reach& b) {
        return std::tie(a.distance, a.block) < std::tie(b.distance, b.block);
    });
    return result;
}

double hit_probability(const Cfg& cfg, BlockId from, BlockId target, std::size_t k) {
    const std::size_t t = cfg.index_of(target);
    cfg.index_of(from);
    if (k == 0) return 0.0;

    // h[x] = probability of hitting target within j steps starting at x.
    std::vector<double> h(cfg.size(), 0.0);
    h[t] = 1.0;
    std::vector<double> next(cfg.size());
    for (std::size_t j = 1; j < k; ++j) {
        for (std::size_t x = 0; x < cfg.size(); ++x) {
            if (x == t) {
                next[x] = 1.0;
                continue;
            }
            double acc = 0.0;
            for (const Edge& e : cfg.out_edges(cfg.blocks()[x].id)) {
                acc += e.prob * h[cfg.index_of(e.dst)];
            }
            next[x] = acc;
        }
        h.swap(next);
    }
    double result = 0.0;
    for (const Edge& e : cfg.out_edges(from)) result += e.prob * h[cfg.index_of(e.dst)];
    return result;
}

}  // namespace kedge
