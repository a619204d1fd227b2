#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frame_iterates/report.hpp"

namespace fi {

struct RunConfig {
    std::string command;  // generate | analyze | represent | dual | perturb | ladder | reproduce
    std::string name;     // reproduction name for `reproduce`
    std::vector<std::string> inputs;
    std::string output;  // empty writes to stdout
    std::string spec_path;
    std::vector<long> windows;
    std::optional<double> tau_scale;
    std::optional<double> eta;
    std::optional<int> edge_width;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::optional<double> c;
    std::optional<double> alpha;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitContract = 2 };

// Tolerances with the config's overrides applied; throws SpecError for non-positive overrides.
Tolerances tolerances_for(const RunConfig& cfg);

// Parses argv; a JSON file given by --config supplies defaults that explicit flags override.
// Throws ParseError on malformed input.
RunConfig parse_command_line(int argc, const char* const* argv);

// Names accepted by `reproduce`.
const std::vector<std::string>& reproduction_names();

// Runs one reproduction and returns its report; throws ContractViolation when the expected outcome
// is not met.
Json reproduce(const std::string& name, const RunConfig& cfg);

// Executes the command, writing the report to cfg.output (atomically) or `out`. Returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// argv entry point used by the executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fi
