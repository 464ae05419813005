#pragma once

#include <stdexcept>
#include <string>

namespace dsrsim {

// Invalid scenario/workload parameters; the message names the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dsrsim
