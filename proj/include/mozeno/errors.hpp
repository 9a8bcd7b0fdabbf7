#pragma once

#include <stdexcept>
#include <string>

namespace mozeno {

/// Bad instance/experiment configuration, unsupported parameter combination.
/// CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid plan, inapplicable action, invalid action sequence.
struct PlanError : std::runtime_error {
    explicit PlanError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mozeno
