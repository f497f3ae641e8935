#include "robin/error.hpp"

namespace robin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::Evaluation: return "EvaluationError";
    case ErrorCode::ZeroCertificationFailed: return "ZeroCertificationFailed";
    case ErrorCode::PositivityFailed: return "PositivityFailed";
    case ErrorCode::ShiftCertificationFailed: return "ShiftCertificationFailed";
    case ErrorCode::QuadratureNonconvergence: return "QuadratureNonconvergence";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::NewtonStalled: return "NewtonStalled";
    case ErrorCode::EscapeBelow: return "EscapeBelow";
    case ErrorCode::EscapeAbove: return "EscapeAbove";
    case ErrorCode::PowerIterationStalled: return "PowerIterationStalled";
    case ErrorCode::NoUpperBracket: return "NoUpperBracket";
    case ErrorCode::MultiplicityNotObserved: return "MultiplicityNotObserved";
    case ErrorCode::AreaConditionFails: return "AreaConditionFails";
    case ErrorCode::BranchLost: return "BranchLost";
    case ErrorCode::NotDirichlet: return "NotDirichlet";
    case ErrorCode::NoInnerSolution: return "NoInnerSolution";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace robin
