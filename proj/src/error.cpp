#include "fishcoh/error.hpp"

namespace fishcoh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotTraceOne: return "NotTraceOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::InvalidKraus: return "InvalidKraus";
    case ErrorCode::InvalidIO: return "InvalidIO";
    case ErrorCode::IncompleteAtTheta0: return "IncompleteAtTheta0";
    case ErrorCode::IncompleteAtTheta: return "IncompleteAtTheta";
    case ErrorCode::Incomplete: return "Incomplete";
    case ErrorCode::StateIncoherent: return "StateIncoherent";
    case ErrorCode::SingularOutcome: return "SingularOutcome";
    case ErrorCode::SingularFamily: return "SingularFamily";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::InvalidDatum: return "InvalidDatum";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace fishcoh
