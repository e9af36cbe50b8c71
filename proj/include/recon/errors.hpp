#pragma once

#include <stdexcept>
#include <string>

namespace recon {

// Bad user input: flags, config files, inconsistent options. CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent data: parse failures, window violations,
// missing cells where a complete block is required. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular designs, non-convergence, rank deficiency.
// CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace recon
