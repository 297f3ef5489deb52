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

#include "kedge/simulator.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "kedge/memory.hpp"

namespace kedge {

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::ExecStart: return "ExecStart";
        case EventKind::ExecEnd: return "ExecEnd";
        case EventKind::DemandMiss: return "DemandMiss";
        case EventKind::DecompStart: return "DecompStart";
        case EventKind::DecompEnd: return "DecompEnd";
        case EventKind::Delete: return "Delete";
        case EventKind::Evict: return "Evict";
        case EventKind::Patch: return "Patch";
        case EventKind::PreRequest: return "PreRequest";
    }
    return "?";
}

namespace {

struct Job {
    BlockId block;
    bool demand;
};

class Simulation {
public:
    Simulation(const Cfg& cfg, const PolicyConfig& policy, const CostModel& cost)
        : cfg_(cfg), policy_(policy), cost_(cost), mem_(MemoryState::init_image(cfg, policy.cap)) {
        metrics_.peak_footprint = mem_.footprint();
        metrics_.baseline_uncompressed_footprint = cfg.total_uncompressed_size();
    }

    RunResult execute(const Trace& trace) {
        const auto& steps = trace.steps;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const BlockId b = steps[i];
            metrics_.baseline_cycles += cfg_.block(b).exec_cycles;
            arrive(b);
            if (i > 0) link(steps[i - 1], b);
            start(b);
            advance_to(now_ + cfg_.block(b).exec_cycles);
            emit(EventKind::ExecEnd, b);
            if (i + 1 < steps.size()) traverse(steps[i + 1]);
        }
        metrics_.total_cycles = now_;
        metrics_.avg_footprint =
            now_ == 0 ? static_cast<double>(mem_.footprint())
                      : static_cast<double>(footprint_area_) / static_cast<double>(now_);
        return {metrics_, std::move(events_)};
    }

private:
    // Execution reaches b; returns once b is Resident.
    void arrive(BlockId b) {
        if (mem_.residency(b) == Residency::Compressed) {
            ++metrics_.demand_misses;
            emit(EventKind::DemandMiss, b);
            advance_to(now_ + cost_.exception_cycles);
            for (const DecompressionOrder& order : demand_fault(policy_, mem_, b).decompress_requests) {
                record_evictions(mem_.evict_for(cfg_.block(order.block).uncompressed_size));
                mem_.request_decompress(order.block, cost_, true);
                ++metrics_.decompressions.demand;
                queue_.push_back({order.block, true});
            }
        }
        if (mem_.residency(b) == Residency::InFlight) {
            promote(b);
            const Cycles wait_from = now_;
            pump();
            if (mem_.residency(b) == Residency::InFlight) {
                advance_to(now_ + mem_.state(b).remaining_cycles);
            }
            metrics_.stall_cycles += now_ - wait_from;
        }
    }

    // The branch that brought execution from u into b now targets b's copy.
    void link(BlockId u, BlockId b) {
        if (mem_.residency(u) != Residency::Resident) return;
        auto ordinal = cfg_.out_edge_ordinal(u, b);
        if (mem_.link_branch({u, *ordinal}, b) == 0) return;
        ++metrics_.patches;
        metrics_.background_cycles += cost_.patch_cycles;
        emit(EventKind::Patch, b, u);
    }

    void start(BlockId b) {
        mem_.set_clock(now_);
        on_block_enter(policy_, mem_, b);
        emit(EventKind::ExecStart, b);

        const BlockId running[] = {b};
        for (const DecompressionOrder& order : predecompress_requests(policy_, cfg_, mem_, b)) {
            if (!admissible(order.block, running)) continue;
            record_evictions(mem_.evict_for(cfg_.block(order.block).uncompressed_size, running));
            mem_.request_decompress(order.block, cost_, false, running);
            ++metrics_.decompressions.pre;
            emit(EventKind::PreRequest, order.block);
            queue_.push_back({order.block, false});
        }
        pump();
    }

    void traverse(BlockId next) {
        for (BlockId victim : advance_counters(policy_, mem_, next)) {
            const std::size_t undone = mem_.delete_resident(victim);
            ++metrics_.deletions;
            metrics_.patches += undone;
            metrics_.background_cycles += cost_.compress_cycles + cost_.patch_cycles * undone;
            emit(EventKind::Delete, victim);
        }
    }

    // A speculative copy must leave room for any later demand miss, which can
    // evict Resident copies but never InFlight ones.
    bool admissible(BlockId b, std::span<const BlockId> protect) const {
        if (mem_.residency(b) != Residency::Compressed) return false;
        if (!mem_.cap()) return true;
        const Bytes size = cfg_.block(b).uncompressed_size;
        if (!mem_.can_make_room(size, protect)) return false;
        return mem_.compressed_area_bytes() + mem_.in_flight_bytes() + size +
                   cfg_.max_uncompressed_size() <=
               *mem_.cap();
    }

    // evict_for has already freed every victim; replay the footprint so each
    // Evict event shows the image right after its own victim left.
    void record_evictions(const std::vector<Eviction>& evictions) {
        Bytes footprint = mem_.footprint();
        for (const Eviction& e : evictions) footprint += cfg_.block(e.block).uncompressed_size;
        for (const Eviction& e : evictions) {
            ++metrics_.evictions;
            metrics_.patches += e.patches_undone;
            metrics_.background_cycles += cost_.compress_cycles + cost_.patch_cycles * e.patches_undone;
            footprint -= cfg_.block(e.block).uncompressed_size;
            emit(EventKind::Evict, e.block, std::nullopt, footprint);
        }
    }

    // Moves b's queued job to the head with demand priority, suspending a
    // different speculative job that is running.
    void promote(BlockId b) {
        if (running_ && running_->block == b) {
            running_->demand = true;
            return;
        }
        auto it = std::find_if(queue_.begin(), queue_.end(), [b](const Job& j) { return j.block == b; });
        if (it == queue_.end()) throw ContractViolation(fmt::format("{} is InFlight but not queued", b));
        queue_.erase(it);
        if (running_) {
            queue_.push_front(*running_);
            running_.reset();
        }
        queue_.push_front({b, true});
    }

    // Starts queued work and retires zero-latency jobs at the current cycle.
    void pump() { advance_to(now_); }

    // Moves the clock to `until`, letting the decompression server work.
    void advance_to(Cycles until) {
        while (true) {
            if (!running_) {
                if (queue_.empty()) break;
                running_ = queue_.front();
                queue_.pop_front();
                if (started_.insert(running_->block).second) {
                    emit(EventKind::DecompStart, running_->block);
                }
            }
            const BlockId job = running_->block;
            const Cycles remaining = mem_.state(job).remaining_cycles;
            if (now_ + remaining > until) {
                mem_.progress(job, until - now_);
                tick(until);
                return;
            }
            mem_.progress(job, remaining);
            tick(now_ + remaining);
            mem_.complete_decompress(job);
            started_.erase(job);
            running_.reset();
            emit(EventKind::DecompEnd, job);
        }
        tick(until);
    }

    void tick(Cycles to) {
        footprint_area_ += static_cast<long double>(mem_.footprint()) * (to - now_);
        now_ = to;
    }

    void emit(EventKind kind, BlockId b, std::optional<BlockId> source = std::nullopt,
              std::optional<Bytes> footprint = std::nullopt) {
        const Bytes fp = footprint.value_or(mem_.footprint());
        metrics_.peak_footprint = std::max(metrics_.peak_footprint, fp);
        events_.push_back({now_, kind, b, fp, source});
    }

    const Cfg& cfg_;
    const PolicyConfig& policy_;
    const CostModel& cost_;
    MemoryState mem_;
    Metrics metrics_;
    std::vector<TimelineEvent> events_;

    Cycles now_ = 0;
    long double footprint_area_ = 0;
    std::optional<Job> running_;
    std::deque<Job> queue_;
    std::set<BlockId> started_;
};

}  // namespace

RunResult run(const Cfg& cfg, const Trace& trace, const PolicyConfig& policy, const CostModel& cost) {
    policy.validate();
    if (auto report = validate_cfg(cfg); !report.ok()) {
        throw ConfigError("invalid CFG:\n" + report.to_string());
    }
    if (auto report = validate_trace(cfg, trace); !report.ok()) {
        throw ConfigError("trace does not match CFG:\n" + report.to_string());
    }
    return Simulation(cfg, policy, cost).execute(trace);
}

std::vector<SweepRow> sweep(const Cfg& cfg, const Trace& trace, const PolicyConfig& base,
                            const CostModel& cost, std::span<const KValue> k_values,
                            std::span<const DecompMode> modes) {
    std::vector<SweepRow> rows;
    rows.reserve(k_values.size() * modes.size());
    for (DecompMode mode : modes) {
        for (KValue k : k_values) {
            PolicyConfig policy = base;
            policy.k_compress = k;
            policy.mode = mode;
            rows.push_back({k, mode, policy.k_pre, run(cfg, trace, policy, cost).metrics});
        }
    }
    return rows;
}

}  // namespace kedge
