#include "noetherlab/error.hpp"

namespace nlab {

std::string_view to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidParam: return "InvalidParam";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::OutsideClassicalRegion: return "OutsideClassicalRegion";
        case ErrorCode::UnboundedRegime: return "UnboundedRegime";
        case ErrorCode::UndefinedOnCircular: return "UndefinedOnCircular";
        case ErrorCode::UndefinedPhase: return "UndefinedPhase";
        case ErrorCode::OriginSingularity: return "OriginSingularity";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::NonIntegrableSingularity: return "NonIntegrableSingularity";
        case ErrorCode::MaxRefinementExceeded: return "MaxRefinementExceeded";
        case ErrorCode::PathLeavesDomain: return "PathLeavesDomain";
        case ErrorCode::InsufficientEvents: return "InsufficientEvents";
        case ErrorCode::EvaluationFailed: return "EvaluationFailed";
        case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace nlab
