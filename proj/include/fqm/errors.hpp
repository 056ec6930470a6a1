#pragma once

#include <stdexcept>
#include <string>

namespace fqm {

// Bad user-supplied data: malformed symbols, precondition violations,
// non-isotropic subgroups, invalid cyclotomic orders, ...
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// An enumeration or search would exceed a configured size bound.
struct SizeLimitError : std::runtime_error {
    explicit SizeLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal construction failed (exhausted search, violated invariant,
// failed certificate). Indicates either unmet hypotheses or a bug.
struct ComputationError : std::runtime_error {
    explicit ComputationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fqm
