#include "vorwave/error.hpp"

namespace vorwave {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::Io: return "Io";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateSlope: return "DegenerateSlope";
    case ErrorKind::NearResonance: return "NearResonance";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::CountChanged: return "CountChanged";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoPatternWithinRadius: return "NoPatternWithinRadius";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::NonpositiveDepth: return "NonpositiveDepth";
    case ErrorKind::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorKind::SingularMode: return "SingularMode";
    case ErrorKind::KernelLeakage: return "KernelLeakage";
    case ErrorKind::ZeroTraceEigenfunction: return "ZeroTraceEigenfunction";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::PathDisagreement: return "PathDisagreement";
    case ErrorKind::BranchInconsistent: return "BranchInconsistent";
    case ErrorKind::InterpolationRange: return "InterpolationRange";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::NotAdmissible:
    case ErrorKind::NearResonance:
        return 1;
    case ErrorKind::Io:
        return 3;
    default:
        return 2;
    }
}

Error::Error(ErrorKind kind, std::string operation, const std::string& detail)
    : std::runtime_error(operation + ": " + to_string(kind) + ": " + detail),
      kind_(kind), operation_(std::move(operation)), detail_(detail) {}

void fail(ErrorKind kind, const std::string& operation, const std::string& detail) {
    throw Error(kind, operation, detail);
}

}  // namespace vorwave
