#pragma once

#include <stdexcept>
#include <string>

namespace osc_transport {

enum class ErrorKind {
    InvalidArgument,
    FrequencyTooSmall,
    BracketFailure,
    NoSolution,
    UnsupportedWindow,
    Infeasible,
    Parse,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::FrequencyTooSmall: return "frequency too small";
    case ErrorKind::BracketFailure: return "bracket failure";
    case ErrorKind::NoSolution: return "no solution";
    case ErrorKind::UnsupportedWindow: return "unsupported window";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Parse: return "parse error";
    }
    return "unknown";
}

/// Exception type for every failure raised by the library.
class TransportError : public std::runtime_error {
public:
    TransportError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw TransportError(kind, what);
}

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorKind::InvalidArgument, what);
}

} // namespace detail
} // namespace osc_transport
