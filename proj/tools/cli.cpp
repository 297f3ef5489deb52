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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "kedge/kedge.hpp"

namespace kedge::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct RunSpec {
    std::string cfg_path;
    std::string trace_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_steps;
    std::string k_compress = "2";
    std::string mode = "on-demand";
    std::uint32_t k_pre = 1;
    std::optional<Bytes> cap;
    CostModel cost;
    std::string metrics_out;
    std::string timeline_out;
};

void add_input_flags(CLI::App& cmd, RunSpec& spec) {
    cmd.add_option("--cfg", spec.cfg_path, "CFG file")->required();
    cmd.add_option("--trace", spec.trace_path, "trace file to replay");
    cmd.add_option("--seed", spec.seed, "generate a trace with this seed");
    cmd.add_option("--max-steps", spec.max_steps, "length bound for a generated trace");
}

void add_policy_flags(CLI::App& cmd, RunSpec& spec) {
    cmd.add_option("--k-compress", spec.k_compress, "k-edge compression budget, or inf")
        ->capture_default_str();
    cmd.add_option("--mode", spec.mode, "decompression strategy")
        ->check(CLI::IsMember({"on-demand", "pre-all", "pre-single"}))
        ->capture_default_str();
    cmd.add_option("--k-pre", spec.k_pre, "pre-decompression window in edges")->capture_default_str();
    cmd.add_option("--cap", spec.cap, "memory cap in bytes");
    cmd.add_option("--decomp-base", spec.cost.decomp_base, "cycles per decompression");
    cmd.add_option("--decomp-per-byte", spec.cost.decomp_per_byte, "cycles per compressed byte");
    cmd.add_option("--exception-cycles", spec.cost.exception_cycles, "demand-miss handler cycles");
    cmd.add_option("--patch-cycles", spec.cost.patch_cycles, "cycles per branch patch");
    cmd.add_option("--compress-cycles", spec.cost.compress_cycles, "cycles per deletion");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) throw IoError("cannot write " + path);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_file(path, content);
    }
}

// Loads and validates the CFG; returns nullopt after reporting violations.
std::optional<Cfg> load_valid_cfg(const std::string& path, std::ostream& err) {
    Cfg cfg = load_cfg(path);
    if (auto report = validate_cfg(cfg); !report.ok()) {
        err << path << ": invalid CFG\n" << report.to_string();
        return std::nullopt;
    }
    return cfg;
}

std::optional<Trace> obtain_trace(const Cfg& cfg, const RunSpec& spec, std::ostream& err) {
    const bool replay = !spec.trace_path.empty();
    const bool generate = spec.seed.has_value() || spec.max_steps.has_value();
    if (replay == generate) {
        throw UsageError("give exactly one of --trace or --seed/--max-steps");
    }
    if (generate) {
        if (!spec.seed || !spec.max_steps) throw UsageError("--seed and --max-steps go together");
        if (*spec.max_steps == 0) throw UsageError("--max-steps must be positive");
        return generate_trace(cfg, *spec.seed, *spec.max_steps);
    }
    Trace trace = load_trace(spec.trace_path);
    if (auto report = validate_trace(cfg, trace); !report.ok()) {
        err << spec.trace_path << ": trace does not match CFG\n" << report.to_string();
        return std::nullopt;
    }
    return trace;
}

KValue parse_k_or_throw(const std::string& text) {
    auto k = parse_k_value(text);
    if (!k) throw UsageError(fmt::format("invalid k value '{}' (positive integer or inf)", text));
    return *k;
}

PolicyConfig policy_from(const RunSpec& spec) {
    PolicyConfig policy;
    policy.k_compress = parse_k_or_throw(spec.k_compress);
    policy.mode = *parse_decomp_mode(spec.mode);
    policy.k_pre = spec.k_pre;
    policy.cap = spec.cap;
    try {
        policy.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    return policy;
}

int cmd_validate(const std::string& cfg_path, std::ostream& out, std::ostream& err) {
    auto cfg = load_valid_cfg(cfg_path, err);
    if (!cfg) return kValidationFailed;
    out << cfg_path << ": ok (" << cfg->size() << " blocks, " << cfg->edges().size() << " edges)\n";
    return kOk;
}

int cmd_gen_trace(const std::string& cfg_path, std::uint64_t seed, std::size_t max_steps,
                  const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto cfg = load_valid_cfg(cfg_path, err);
    if (!cfg) return kValidationFailed;
    if (max_steps == 0) throw UsageError("--max-steps must be positive");
    emit(out_path, serialize_trace(generate_trace(*cfg, seed, max_steps)), out);
    return kOk;
}

int cmd_simulate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    const PolicyConfig policy = policy_from(spec);
    auto cfg = load_valid_cfg(spec.cfg_path, err);
    if (!cfg) return kValidationFailed;
    auto trace = obtain_trace(*cfg, spec, err);
    if (!trace) return kValidationFailed;

    RunResult result = run(*cfg, *trace, policy, spec.cost);
    emit(spec.metrics_out, metrics_to_json(result.metrics), out);
    if (!spec.timeline_out.empty()) write_file(spec.timeline_out, timeline_to_csv(result.timeline));
    return kOk;
}

int cmd_sweep(const RunSpec& spec, const std::vector<std::string>& k_list,
              const std::vector<std::string>& mode_list, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    if (k_list.empty()) throw UsageError("--k-values needs at least one value");
    std::vector<KValue> ks;
    for (const auto& text : k_list) ks.push_back(parse_k_or_throw(text));
    std::vector<DecompMode> modes;
    for (const auto& text : mode_list) {
        auto m = parse_decomp_mode(text);
        if (!m) throw UsageError(fmt::format("unknown mode '{}'", text));
        modes.push_back(*m);
    }
    PolicyConfig base = policy_from(spec);
    if (modes.empty()) modes.push_back(base.mode);
    for (DecompMode m : modes) {
        PolicyConfig probe = base;
        probe.mode = m;
        try {
            probe.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
    }

    auto cfg = load_valid_cfg(spec.cfg_path, err);
    if (!cfg) return kValidationFailed;
    auto trace = obtain_trace(*cfg, spec, err);
    if (!trace) return kValidationFailed;

    auto rows = sweep(*cfg, *trace, base, spec.cost, ks, modes);
    emit(out_path, sweep_to_csv(rows), out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulates k-edge basic-block compression and pre-decompression", "kedge"};
    app.require_subcommand(1);

    std::string validate_cfg_path;
    auto* validate = app.add_subcommand("validate", "check a CFG file");
    validate->add_option("--cfg", validate_cfg_path, "CFG file")->required();

    std::string gen_cfg_path;
    std::uint64_t gen_seed = 0;
    std::size_t gen_max_steps = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-trace", "write a seeded random-walk trace");
    gen->add_option("--cfg", gen_cfg_path, "CFG file")->required();
    gen->add_option("--seed", gen_seed, "64-bit seed")->required();
    gen->add_option("--max-steps", gen_max_steps, "maximum trace length")->required();
    gen->add_option("--out", gen_out, "output file (default stdout)");

    RunSpec sim_spec;
    auto* simulate = app.add_subcommand("simulate", "run one configuration");
    add_input_flags(*simulate, sim_spec);
    add_policy_flags(*simulate, sim_spec);
    simulate->add_option("--metrics-out", sim_spec.metrics_out, "metrics JSON (default stdout)");
    simulate->add_option("--timeline-out", sim_spec.timeline_out, "timeline CSV");

    RunSpec sweep_spec;
    std::vector<std::string> k_values;
    std::vector<std::string> modes;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a k_compress x mode grid");
    add_input_flags(*sweep_cmd, sweep_spec);
    add_policy_flags(*sweep_cmd, sweep_spec);
    sweep_cmd->add_option("--k-values", k_values, "k_compress values, e.g. 1,2,inf")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--modes", modes, "decompression modes (default --mode)")->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "output CSV (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrIo;
    }

    try {
        if (*validate) return cmd_validate(validate_cfg_path, out, err);
        if (*gen) return cmd_gen_trace(gen_cfg_path, gen_seed, gen_max_steps, gen_out, out, err);
        if (*simulate) return cmd_simulate(sim_spec, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep_spec, k_values, modes, sweep_out, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageOrIo;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageOrIo;
    } catch (const InfeasibleCapError& e) {
        err << "infeasible configuration: " << e.what() << "\n";
        return kInfeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailed;
    }
    return kUsageOrIo;
}

}  // namespace kedge::cli
