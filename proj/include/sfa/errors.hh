/* errors.hh -- exception types shared across the library. */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfa {

/// Base class of everything thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violated precondition, malformed input, mixed algebras and the like.
struct UsageError : Error {
    using Error::Error;
};

/// Syntax error in a textual artefact (predicate, SFA file, regex, ...).
struct ParseError : UsageError {
    ParseError(const std::string& msg, std::size_t pos)
        : UsageError(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}

    std::size_t position;
};

enum class ResourceKind { MintermCap, Timeout, OomGuard };

inline const char* to_string(ResourceKind k) {
    switch (k) {
        case ResourceKind::MintermCap: return "minterm-cap";
        case ResourceKind::Timeout: return "timeout";
        case ResourceKind::OomGuard: return "oom-guard";
    }
    return "?";
}

/// A configured resource guard tripped; computation was aborted, not wrong.
struct ResourceError : Error {
    ResourceError(ResourceKind k, const std::string& msg) : Error(msg), kind(k) {}

    ResourceKind kind;
};

} // namespace sfa
