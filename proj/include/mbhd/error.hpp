#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mbhd {

enum class ErrorCode {
  DimensionTooLarge,
  NotNormalized,
  NegativeProbability,
  DegenerateMarginal,
  InvalidCorrelation,
  OutOfFGMRange,
  ZeroMarginal,
  NotFullSupport,
  IllConditioned,
  ZeroNorm,
  CollapsedSupport,
  ZeroVariance,
  OffSupportSample,
  InsufficientSamples,
  EpsOutOfRange,
  ArityMismatch,
  MissingColumn,
  NonBinaryPredicateResult,
  DatasetMissing,
  InvalidArgument,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mbhd
