#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robin {

enum class ErrorCode {
  Syntax,
  UnknownIdentifier,
  Evaluation,
  ZeroCertificationFailed,
  PositivityFailed,
  ShiftCertificationFailed,
  QuadratureNonconvergence,
  SingularOperator,
  LengthMismatch,
  IterationLimit,
  NewtonStalled,
  EscapeBelow,
  EscapeAbove,
  PowerIterationStalled,
  NoUpperBracket,
  MultiplicityNotObserved,
  AreaConditionFails,
  BranchLost,
  NotDirichlet,
  NoInnerSolution,
  Config,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` tells callers (and the C
// layer) what went wrong without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Parse failure with the byte offset of the offending character.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::Syntax, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

// Carries the radius at which a shooting trajectory left the admissible band.
class EscapeError : public Error {
public:
  EscapeError(ErrorCode code, double radius)
      : Error(code, std::string(code == ErrorCode::EscapeBelow ? "trajectory escaped below"
                                                               : "trajectory escaped above") +
                        " at r=" + std::to_string(radius)),
        radius_(radius) {}

  double radius() const noexcept { return radius_; }

private:
  double radius_;
};

// A configuration problem, reported with the offending key path.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& reason)
      : Error(ErrorCode::Config, (key.empty() ? reason : key + ": " + reason)),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace robin
