#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace csb {

struct CommandResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false;
    std::string output;  // stdout and stderr, merged

    bool ok() const { return !spawn_failed && !timed_out && exit_code == 0; }
};

/// Run argv[0] with the given arguments, capturing merged stdout/stderr.
/// The child is killed when the timeout elapses.
CommandResult run_command(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout = std::chrono::seconds(60));

/// True if `name` resolves to an executable on PATH (or is an executable path).
bool command_exists(const std::string& name);

}  // namespace csb
