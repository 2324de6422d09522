#include "approach/error.hpp"

namespace approach {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTooFewMatches: return "TooFewMatches";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kNotEssential: return "NotEssential";
    case ErrorCode::kAmbiguousCheirality: return "AmbiguousCheirality";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kEpipoleDegenerate: return "EpipoleDegenerate";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kMarginViolation: return "MarginViolation";
    case ErrorCode::kEmptyFeatureSet: return "EmptyFeatureSet";
    case ErrorCode::kTooFewObjectFeatures: return "TooFewObjectFeatures";
    case ErrorCode::kInsufficientParallax: return "InsufficientParallax";
    case ErrorCode::kArrived: return "Arrived";
    case ErrorCode::kNoHorizontalMotion: return "NoHorizontalMotion";
    case ErrorCode::kInitializationFailed: return "InitializationFailed";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingCamera: return "MissingCamera";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kInvertedBox: return "InvertedBox";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNothingVisible: return "NothingVisible";
  }
  return "Unknown";
}

}  // namespace approach
