#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weakiso {

enum class ErrorKind {
  DimensionOutOfRange,
  DimensionMismatch,
  Parse,
  NotABijection,
  ResourceGuard,
  ParityViolation,
  WrongResidue,
  IllegalCombination,
  InvalidParams,
  NotAnIsometry,
  NotEvenIsometry,
  NotSigmaIJ,
  NotInFamily,
  SmallDimension,
  DoesNotStabilize,
  ResidueMismatch,
  EmptyP,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::ResourceGuard: return "ResourceGuard";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::WrongResidue: return "WrongResidue";
    case ErrorKind::IllegalCombination: return "IllegalCombination";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotAnIsometry: return "NotAnIsometry";
    case ErrorKind::NotEvenIsometry: return "NotEvenIsometry";
    case ErrorKind::NotSigmaIJ: return "NotSigmaIJ";
    case ErrorKind::NotInFamily: return "NotInFamily";
    case ErrorKind::SmallDimension: return "SmallDimension";
    case ErrorKind::DoesNotStabilize: return "DoesNotStabilize";
    case ErrorKind::ResidueMismatch: return "ResidueMismatch";
    case ErrorKind::EmptyP: return "EmptyP";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace weakiso
