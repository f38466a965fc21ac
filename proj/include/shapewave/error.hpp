#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shapewave {

enum class ErrorCode {
  InvalidArgument,
  TooShort,
  NonIncreasingTimes,
  NonFiniteValue,
  NonMonotonePhase,
  TooFewPeriods,
  NotNearIntegerPeriods,
  DegenerateFactors,
  GridTooCoarse,
  BandExceedsNyquist,
  MismatchedLengths,
  DegenerateInput,
  NonConvergence,
  WindowTooShort,
  AmbiguousFundamental,
  NonMonotoneEstimate,
  NonFiniteState,
  ParseError,
  IoError,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every failure in the library is reported through this type. `where` carries
// the offending sample index or, for file parsing, the 1-based line number.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> where = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  std::optional<std::size_t> where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> where_;
};

}  // namespace shapewave
