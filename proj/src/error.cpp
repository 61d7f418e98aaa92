#include "heilbronn/error.hpp"

namespace heilbronn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::EmptySets: return "EmptySets";
    case ErrorKind::LadderTooLong: return "LadderTooLong";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::UnequalPencils: return "UnequalPencils";
    case ErrorKind::CenterOffsetTooLarge: return "CenterOffsetTooLarge";
    case ErrorKind::InfeasibleParams: return "InfeasibleParams";
    case ErrorKind::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorKind::HomogeneityFailed: return "HomogeneityFailed";
    case ErrorKind::GateFailed: return "GateFailed";
    case ErrorKind::NotRational: return "NotRational";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace heilbronn
