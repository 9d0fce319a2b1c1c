#pragma once

#include <stdexcept>
#include <string>

namespace gridgas {

// Bad inputs: rejected preconditions, malformed specs, parity violations.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal failures: a postcondition or cross-check did not hold.
class computation_error : public std::runtime_error {
public:
    explicit computation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridgas
