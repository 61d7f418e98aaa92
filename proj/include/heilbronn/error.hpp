#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heilbronn {

enum class ErrorKind {
  DegeneratePair,
  NotPrime,
  OutOfRange,
  DuplicatePoints,
  EmptyResult,
  TooFewPoints,
  EmptySets,
  LadderTooLong,
  EmptyRange,
  UnequalPencils,
  CenterOffsetTooLarge,
  InfeasibleParams,
  NoFeasiblePoint,
  HomogeneityFailed,
  GateFailed,
  NotRational,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every library operation; the CLI maps it to exit code 1.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace heilbronn
