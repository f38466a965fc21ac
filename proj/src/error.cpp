#include "shapewave/error.hpp"

namespace shapewave {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonIncreasingTimes: return "NonIncreasingTimes";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonMonotonePhase: return "NonMonotonePhase";
    case ErrorCode::TooFewPeriods: return "TooFewPeriods";
    case ErrorCode::NotNearIntegerPeriods: return "NotNearIntegerPeriods";
    case ErrorCode::DegenerateFactors: return "DegenerateFactors";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::BandExceedsNyquist: return "BandExceedsNyquist";
    case ErrorCode::MismatchedLengths: return "MismatchedLengths";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::AmbiguousFundamental: return "AmbiguousFundamental";
    case ErrorCode::NonMonotoneEstimate: return "NonMonotoneEstimate";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message) {
  std::string out(error_name(code));
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> where)
    : std::runtime_error(decorate(code, message)), code_(code), where_(where) {}

}  // namespace shapewave
