#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratefix/iteration.hpp"

namespace ratefix {

enum class Command { Rate, Certify, Lg, Bailey };
enum class OutputFormat { Text, Json };

/// Resolved invocation of one CLI run.
struct RunConfig {
    Command command = Command::Rate;
    std::string input_path;
    double plr = 1.0;
    std::optional<double> tolerance;       // per-command default when unset
    std::optional<std::size_t> max_iters;  // per-command default when unset
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Text;
    bool strict = true;
    double shrink = 0.5;
    std::optional<std::vector<std::size_t>> base_cell;
    std::string out_path;  // empty: caller prints the report
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 not converged / not certified
    std::string report;
};

/// Per-command iteration defaults (population runs get the tighter, longer
/// budget) overridden by any explicit config values.
IterationSettings settings_for(const RunConfig& config);

/// Ingests the input, dispatches the solver, renders the report and writes
/// it to out_path (atomically) when one is given. Input problems throw; a
/// non-converged or uncertified run is reported with exit code 2.
RunResult run(const RunConfig& config);

const char* command_name(Command c);

}  // namespace ratefix
