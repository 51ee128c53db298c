#pragma once

#include <stdexcept>
#include <string>

namespace gw {

// Error hierarchy shared by the library and the CLI. The CLI maps each
// class to a process exit code: ConfigError -> 2, DomainError -> 3,
// ResourceError -> 4. InvariantError signals an internal bug trap.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

struct InvariantError : Error {
    explicit InvariantError(const std::string& msg) : Error(msg) {}
};

}  // namespace gw
