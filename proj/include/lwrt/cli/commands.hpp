#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lwrt/cli/config.hpp"

namespace lwrt::cli {

enum ExitCode { kExitOk = 0, kExitNumeric = 1, kExitConfig = 2 };

struct RunOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand; errors are reported on stderr and mapped to exit codes.
int run(const std::string& subcommand, const RunOptions& options);

// Same, on an already parsed configuration; throws on failure.
void run_command(const std::string& subcommand, ExperimentConfig config, bool quiet);

}  // namespace lwrt::cli
