#pragma once

#include <stdexcept>
#include <string>

namespace smcensus {

// Malformed input, violated precondition, or out-of-range parameter.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A configured size limit (enumeration cap, lattice state cap, ...) was hit.
class CapExceeded : public std::length_error {
public:
    explicit CapExceeded(const std::string& what) : std::length_error(what) {}
};

} // namespace smcensus
