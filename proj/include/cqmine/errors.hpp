#pragma once

#include <stdexcept>
#include <string>

namespace cqmine {

// Error hierarchy used across the toolkit.  The CLI maps UsageError to exit
// code 2 and everything else to exit code 1, printing "error: <category>: msg"
// so callers can grep a stable prefix.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& msg)
        : std::runtime_error(msg), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error("usage", msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error("data", msg) {}
};

// Retriable condition (e.g. catalog rate limiting exhausted its retries).
class RateLimitError : public Error {
public:
    explicit RateLimitError(const std::string& msg) : Error("rate-limit", msg) {}
};

} // namespace cqmine
