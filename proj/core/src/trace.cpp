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

#include "kedge/trace.hpp"

#include <random>

#include "text_util.hpp"

namespace kedge {

namespace {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Trace generate_trace(const Cfg& cfg, std::uint64_t seed, std::size_t max_steps) {
    if (max_steps == 0) throw ConfigError("max_steps must be positive");
    if (auto report = validate_cfg(cfg); !report.ok()) {
        throw ConfigError("cannot generate a trace on an invalid CFG:\n" + report.to_string());
    }

    std::mt19937_64 rng(seed);
    Trace trace;
    trace.source = GeneratedSource{seed, max_steps};
    BlockId at = cfg.entry();
    trace.steps.push_back(at);
    while (at != cfg.exit() && trace.steps.size() < max_steps) {
        auto out = cfg.out_edges(at);
        const double u = unit_draw(rng);
        double cumulative = 0.0;
        BlockId next = out.back().dst;
        for (const Edge& e : out) {
            cumulative += e.prob;
            if (u < cumulative) {
                next = e.dst;
                break;
            }
        }
        at = next;
        trace.steps.push_back(at);
    }
    return trace;
}

ValidationReport validate_trace(const Cfg& cfg, const Trace& trace) {
    ValidationReport report;
    auto add = [&](std::size_t i, std::string msg) {
        report.violations.push_back({std::move(msg), i < trace.steps.size()
                                                         ? std::optional(trace.steps[i])
                                                         : std::nullopt,
                                     i});
    };

    if (trace.steps.empty()) {
        add(0, "trace is empty");
        return report;
    }
    if (trace.steps.front() != cfg.entry()) {
        add(0, fmt::format("trace starts at {}, not at entry {}", trace.steps.front(), cfg.entry()));
    }
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        if (!cfg.contains(trace.steps[i])) {
            add(i, fmt::format("unknown block {}", trace.steps[i]));
        }
    }
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
        BlockId a = trace.steps[i];
        BlockId b = trace.steps[i + 1];
        if (!cfg.contains(a) || !cfg.contains(b)) continue;
        if (!cfg.find_edge(a, b)) add(i + 1, fmt::format("no edge {} -> {}", a, b));
    }
    return report;
}

Trace parse_trace(std::string_view text) {
    Trace trace;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        auto tok = detail::tokenize(detail::strip_comment(line));
        if (tok.empty()) continue;
        if (tok.size() != 1) throw ParseError(line_no, "expected one block id per line");
        auto id = parse_block_id(tok[0]);
        if (!id) throw ParseError(line_no, fmt::format("invalid block id '{}'", tok[0]));
        trace.steps.push_back(*id);
    }
    return trace;
}

Trace load_trace(const std::string& path) { return parse_trace(detail::read_file(path)); }

std::string serialize_trace(const Trace& trace) {
    std::string out;
    if (const auto* gen = std::get_if<GeneratedSource>(&trace.source)) {
        out += fmt::format("# generated seed={} max_steps={}\n", gen->seed, gen->max_steps);
    }
    for (BlockId id : trace.steps) out += fmt::format("{}\n", id);
    return out;
}

}  // namespace kedge
