#pragma once

#include <stdexcept>
#include <string>

namespace ecbasis {

enum class ErrorCode {
  InvalidArgument,
  MissingZeroRoot,
  InvalidInterval,
  ZeroPivot,
  Singular,
  ZeroDiagonal,
  RankDeficient,
  IllConditioned,
  OutOfDomain,
  ZeroDenominator,
  SearchFailed,
  NotASubspace,
  IntervalMismatch,
  DimensionMismatch,
  SingularCollocation,
  DegeneratePoint,
  TooFewSamples,
  IoFailure,
  ConfigParse,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as an Error carrying one of the codes
// above; the C layer maps the code one-to-one onto ecb_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ecbasis
