#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fishcoh {

enum class ErrorCode {
  NonSquare,
  NotHermitian,
  NotTraceOne,
  NotPositive,
  DimensionMismatch,
  WrongDimension,
  InvalidKraus,
  InvalidIO,
  IncompleteAtTheta0,
  IncompleteAtTheta,
  Incomplete,
  StateIncoherent,
  SingularOutcome,
  SingularFamily,
  NotPure,
  DimensionTooLarge,
  InvalidPoint,
  InvalidDatum,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// code name is what the CLI prints as the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fishcoh
