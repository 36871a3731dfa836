#pragma once

#include <stdexcept>
#include <string>

namespace ssv {

/// Bad argument or violated precondition.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Distribution family outside the supported class for the requested quantity.
struct unsupported_family : std::runtime_error {
    explicit unsupported_family(const std::string& what) : std::runtime_error(what) {}
};

/// Problem size exceeds an exact-enumeration or construction cap.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested parameter combination cannot be realized; names the violated condition.
struct infeasibility_error : std::runtime_error {
    explicit infeasibility_error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method failed to converge. Carries the final residual.
struct numerical_failure : std::runtime_error {
    double residual;
    numerical_failure(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

/// A theorem hypothesis gate is unmet. Carries the gate text.
struct hypothesis_violation : std::runtime_error {
    explicit hypothesis_violation(const std::string& gate) : std::runtime_error(gate) {}
};

/// Config file problem (syntax, unknown key, bad value). Carries location.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ssv
