#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latcart {

// Bad arguments or violated preconditions.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query point outside the domain of a field or map.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file contents. `offset` is the byte offset (binary formats)
// or 1-based line number (text formats) of the first defect.
struct FormatError : std::runtime_error {
    std::int64_t offset;
    FormatError(const std::string& msg, std::int64_t off)
        : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

// Numerical failure: non-convergence, inverted mesh, degenerate quad.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace latcart
