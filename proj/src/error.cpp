#include "roundness/error.hpp"

namespace roundness {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::ZeroDistance: return "ZeroDistance";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::NegativeExponent: return "NegativeExponent";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::BadBlockExponent: return "BadBlockExponent";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace roundness
