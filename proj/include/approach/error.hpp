#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace approach {

enum class ErrorCode {
  kInvalidArgument,
  // geometry
  kTooFewMatches,
  kDegenerateGeometry,
  kNoConsensus,
  kNotEssential,
  kAmbiguousCheirality,
  kPointAtInfinity,
  kEpipoleDegenerate,
  kBehindCamera,
  // features / matching
  kImageTooSmall,
  kMarginViolation,
  kEmptyFeatureSet,
  // localization / navigation
  kTooFewObjectFeatures,
  kInsufficientParallax,
  kArrived,
  kNoHorizontalMotion,
  kInitializationFailed,
  // io
  kParseError,
  kMissingCamera,
  kUnsupportedFormat,
  kCorruptFile,
  kInvertedBox,
  kIoFailure,
  // eval / simulator
  kLengthMismatch,
  kNothingVisible,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind of failure without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace approach
