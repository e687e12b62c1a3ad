#pragma once

#include <stdexcept>
#include <string>

namespace gcbp {

enum class ErrorKind {
  SizeOutOfRange,
  NonMonotoneCost,
  BadAnchor,
  BadEpsilon,
  IndexOutOfRange,
  WrongClass,
  TooLarge,
  BudgetExceeded,
  InvalidThreePartition,
  ParseError,
  IoError,
  BadModel,
  InternalInfeasible,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorKind::NonMonotoneCost: return "NonMonotoneCost";
    case ErrorKind::BadAnchor: return "BadAnchor";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::WrongClass: return "WrongClass";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidThreePartition: return "InvalidThreePartition";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::InternalInfeasible: return "InternalInfeasible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gcbp
