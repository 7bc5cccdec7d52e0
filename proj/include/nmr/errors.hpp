#pragma once

#include <stdexcept>
#include <string>

namespace nmr {

enum class ErrorCode {
  DuplicateName,
  UnknownName,
  ReflexivePair,
  CycleDetected,
  EmptyInput,
  EmptyReference,
  NotASubset,
  NotRanked,
  NotAMember,
  SyntaxError,
  ConflictingParallelArrows,
  UnknownNode,
  UnknownVariable,
  UnsatisfiableInput,
  InvalidDistance,
  CapacityExceeded,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DuplicateName:             return "DuplicateName";
    case ErrorCode::UnknownName:               return "UnknownName";
    case ErrorCode::ReflexivePair:             return "ReflexivePair";
    case ErrorCode::CycleDetected:             return "CycleDetected";
    case ErrorCode::EmptyInput:                return "EmptyInput";
    case ErrorCode::EmptyReference:            return "EmptyReference";
    case ErrorCode::NotASubset:                return "NotASubset";
    case ErrorCode::NotRanked:                 return "NotRanked";
    case ErrorCode::NotAMember:                return "NotAMember";
    case ErrorCode::SyntaxError:               return "SyntaxError";
    case ErrorCode::ConflictingParallelArrows: return "ConflictingParallelArrows";
    case ErrorCode::UnknownNode:               return "UnknownNode";
    case ErrorCode::UnknownVariable:           return "UnknownVariable";
    case ErrorCode::UnsatisfiableInput:        return "UnsatisfiableInput";
    case ErrorCode::InvalidDistance:           return "InvalidDistance";
    case ErrorCode::CapacityExceeded:          return "CapacityExceeded";
  }
  return "?";
}

/// Single exception type for all domain errors; `code()` identifies the
/// violated precondition, the message carries the specifics (line numbers,
/// offending names, cycle witnesses).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nmr
