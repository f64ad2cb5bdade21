#include "cqmine/subprocess.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>

#include "cqmine/errors.hpp"

namespace cqmine {

CommandResult run_command(const std::string& command) {
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) {
        throw IoError("failed to spawn command: " + std::string(std::strerror(errno)));
    }
    CommandResult result;
    char buffer[1 << 16];
    size_t n = 0;
    while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, n);
    }
    result.status = ::pclose(pipe);
    return result;
}

std::string shell_quote(const std::string& s) {
    std::string quoted;
    quoted.reserve(s.size() + 2);
    quoted.push_back('\'');
    for (char c : s) {
        if (c == '\'') {
            quoted += "'\\''";
        } else {
            quoted.push_back(c);
        }
    }
    quoted.push_back('\'');
    return quoted;
}

}  // namespace cqmine
