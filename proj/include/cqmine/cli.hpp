#pragma once

namespace cqmine {

// Parse argv and run the selected subcommand.
// Exit codes: 0 success, 1 runtime failure (error category on stderr),
// 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace cqmine
