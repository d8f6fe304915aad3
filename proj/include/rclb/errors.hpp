#pragma once

#include <stdexcept>
#include <string>

namespace rclb {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// config/domain/structure/io -> 1, bounds -> 2, internal consistency -> 3.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-supplied value (outside mathematical domain).
struct domain_error : error {
    using error::error;
};

// Request exceeds a documented size/limit bound.
struct bounds_error : error {
    using error::error;
};

// Inconsistent composite input (e.g. inertia not normal in decomposition).
struct structure_error : error {
    using error::error;
};

// Invalid configuration or CLI usage.
struct config_error : error {
    using error::error;
};

// Numerical fit failed (ill-conditioned design, non-convergent ladder).
struct fit_error : error {
    using error::error;
};

// Two independent computation routes disagreed.
struct internal_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

inline int exit_code_for(const error& e) {
    if (dynamic_cast<const internal_error*>(&e)) return 3;
    if (dynamic_cast<const bounds_error*>(&e)) return 2;
    return 1;
}

} // namespace rclb
