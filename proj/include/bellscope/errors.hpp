#pragma once

#include <stdexcept>
#include <string>

namespace bellscope {

// Bad or inconsistent user input (config files, CLI flags, out-of-range
// parameters). The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A model was asked to do something it cannot (missing angle, invalid slot,
// wrong model kind for an operation). The CLI maps this to exit code 3.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bellscope
