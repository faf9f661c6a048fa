#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlab {

enum class ErrorCode {
    InvalidParam,
    BlowUp,
    StepUnderflow,
    NoSignChange,
    OutsideClassicalRegion,
    UnboundedRegime,
    UndefinedOnCircular,
    UndefinedPhase,
    OriginSingularity,
    QuadratureFailure,
    NonIntegrableSingularity,
    MaxRefinementExceeded,
    PathLeavesDomain,
    InsufficientEvents,
    EvaluationFailed,
    UnknownCatalogEntry,
    ConfigError,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace nlab
