#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaprel {

enum class ErrorCode {
  InverseOfZero,
  OutsideDomain,
  BadLevels,
  MalformedStructure,
  AxiomViolation,
  MissingPotentialValue,
  CocycleMismatch,
  InvalidWitness,
  UnresolvedZeta,
  ZetaNotIntegrable,
  ZeroMass,
  EmptyWn,
  EmptyWinf,
  NotInvariantK,
  ZeroStartMass,
  InconsistentVerdicts,
  ParseError,
  UnknownId,
  NonInvariantOverride,
  Unsupported,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InverseOfZero: return "InverseOfZero";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::BadLevels: return "BadLevels";
    case ErrorCode::MalformedStructure: return "MalformedStructure";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::MissingPotentialValue: return "MissingPotentialValue";
    case ErrorCode::CocycleMismatch: return "CocycleMismatch";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::UnresolvedZeta: return "UnresolvedZeta";
    case ErrorCode::ZetaNotIntegrable: return "ZetaNotIntegrable";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::EmptyWn: return "EmptyWn";
    case ErrorCode::EmptyWinf: return "EmptyWinf";
    case ErrorCode::NotInvariantK: return "NotInvariantK";
    case ErrorCode::ZeroStartMass: return "ZeroStartMass";
    case ErrorCode::InconsistentVerdicts: return "InconsistentVerdicts";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NonInvariantOverride: return "NonInvariantOverride";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace gaprel
