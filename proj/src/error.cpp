#include "ecbasis/error.hpp"

namespace ecbasis {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingZeroRoot: return "MissingZeroRoot";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::NotASubspace: return "NotASubspace";
    case ErrorCode::IntervalMismatch: return "IntervalMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularCollocation: return "SingularCollocation";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

}  // namespace ecbasis
