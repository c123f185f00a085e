#include "mbhd/error.hpp"

namespace mbhd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorCode::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorCode::OutOfFGMRange: return "OutOfFGMRange";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::NotFullSupport: return "NotFullSupport";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::CollapsedSupport: return "CollapsedSupport";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::OffSupportSample: return "OffSupportSample";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonBinaryPredicateResult: return "NonBinaryPredicateResult";
    case ErrorCode::DatasetMissing: return "DatasetMissing";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mbhd
