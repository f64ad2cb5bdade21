#pragma once

#include <string>

namespace cqmine {

struct CommandResult {
    int status = 0;           // raw wait status as returned by pclose()
    std::string output;       // captured standard output
    bool ok() const { return status == 0; }
};

// Run a shell command, capturing standard output. Standard error passes
// through to the caller's stderr. Throws IoError if the process cannot be
// spawned; a nonzero exit status is reported via CommandResult, not thrown.
CommandResult run_command(const std::string& command);

// Quote a string for safe interpolation into a POSIX shell command line.
std::string shell_quote(const std::string& s);

}  // namespace cqmine
