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

#include <nlohmann/json.hpp>

namespace kedge {

std::string timeline_to_csv(std::span<const TimelineEvent> timeline) {
    std::string out = "cycle,kind,block,footprint_after\n";
    for (const TimelineEvent& e : timeline) {
        out += fmt::format("{},{},{},{}\n", e.cycle, to_string(e.kind), e.block, e.footprint_after);
    }
    return out;
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["total_cycles"] = m.total_cycles;
    j["stall_cycles"] = m.stall_cycles;
    j["background_cycles"] = m.background_cycles;
    j["decompressions"] = {{"demand", m.decompressions.demand}, {"pre", m.decompressions.pre}};
    j["demand_misses"] = m.demand_misses;
    j["deletions"] = m.deletions;
    j["evictions"] = m.evictions;
    j["patches"] = m.patches;
    j["peak_footprint"] = m.peak_footprint;
    j["avg_footprint"] = m.avg_footprint;
    j["baseline_uncompressed_footprint"] = m.baseline_uncompressed_footprint;
    j["baseline_cycles"] = m.baseline_cycles;
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::string out =
        "k_compress,mode,k_pre,total_cycles,stall_cycles,background_cycles,"
        "decompressions_demand,decompressions_pre,demand_misses,deletions,evictions,patches,"
        "peak_footprint,avg_footprint,baseline_uncompressed_footprint,baseline_cycles\n";
    for (const SweepRow& r : rows) {
        const Metrics& m = r.metrics;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6f},{},{}\n",
                           to_string(r.k_compress), to_string(r.mode), r.k_pre, m.total_cycles,
                           m.stall_cycles, m.background_cycles, m.decompressions.demand,
                           m.decompressions.pre, m.demand_misses, m.deletions, m.evictions,
                           m.patches, m.peak_footprint, m.avg_footprint,
                           m.baseline_uncompressed_footprint, m.baseline_cycles);
    }
    return out;
}

}  // namespace kedge
