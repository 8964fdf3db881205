#pragma once

#include <stdexcept>
#include <string>

namespace vorwave {

enum class ErrorKind {
    Validation,
    Io,
    NoConvergence,
    DegenerateSlope,
    NearResonance,
    WindowTooSmall,
    BracketFailure,
    SearchExhausted,
    CountChanged,
    RankDeficient,
    NoPatternWithinRadius,
    NotAdmissible,
    NonpositiveDepth,
    CompatibilityViolation,
    SingularMode,
    KernelLeakage,
    ZeroTraceEigenfunction,
    QuadratureFailure,
    PathDisagreement,
    BranchInconsistent,
    InterpolationRange,
};

const char* to_string(ErrorKind kind);

// Exit status class: 1 validation, 2 numerical, 3 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string operation, const std::string& detail);

    ErrorKind kind() const { return kind_; }
    const std::string& operation() const { return operation_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorKind kind_;
    std::string operation_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& operation, const std::string& detail);

}  // namespace vorwave
