#include "fbopt/common.hpp"

namespace fbopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::Infeasible:
      return "Infeasible";
    case ErrorCode::NotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorCode::MaxIterations:
      return "MaxIterations";
    case ErrorCode::LinearizedSetEmpty:
      return "LinearizedSetEmpty";
    case ErrorCode::NotFeasible:
      return "NotFeasible";
    case ErrorCode::UnknownProblem:
      return "UnknownProblem";
    case ErrorCode::Parse:
      return "Parse";
    case ErrorCode::Io:
      return "Io";
  }
  return "Unknown";
}

}  // namespace fbopt
