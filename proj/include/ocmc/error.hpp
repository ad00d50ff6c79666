#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ocmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed models: unknown locations, bad transition deltas, shape violations.
struct StructuralError : Error {
    using Error::Error;
};

// Arguments outside an operation's stated domain.
struct DomainError : Error {
    using Error::Error;
};

// Text input rejected; `pos` is a byte offset into the input.
struct ParseError : Error {
    std::size_t pos;
    ParseError(std::size_t p, const std::string& msg)
        : Error(msg + " (at offset " + std::to_string(p) + ")"), pos(p) {}
};

// Raised when an exact computation would exceed its configured budget.
// Carries the size that was refused so callers can report it.
struct BudgetError : Error {
    std::string domain_size;
    BudgetError(const std::string& size, const std::string& msg)
        : Error(msg), domain_size(size) {}
};

}  // namespace ocmc
