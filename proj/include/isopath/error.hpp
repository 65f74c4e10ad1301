#pragma once

#include <stdexcept>
#include <string>

namespace isopath {

enum class ErrorCode {
    InvalidArgument,
    InvalidInput,
    DegenerateGeometry,
    Topology,
    SolverFailure,
    OutOfDomain,
    InvalidCurvature,
    Gouging,
    TooSparse,
};

/// Library-wide exception type; `code` selects the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::Topology: return "topology";
    case ErrorCode::SolverFailure: return "solver-failure";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::InvalidCurvature: return "invalid-curvature";
    case ErrorCode::Gouging: return "gouging";
    case ErrorCode::TooSparse: return "too-sparse";
    }
    return "unknown";
}

} // namespace isopath
