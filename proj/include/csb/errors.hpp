#pragma once

#include <stdexcept>
#include <string>

namespace csb {

// Error taxonomy used for CLI exit codes: config (bad/missing configuration),
// environment (missing executable, unreachable endpoint), data (malformed or
// contract-violating inputs).

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct EnvironmentError : std::runtime_error {
    explicit EnvironmentError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csb
