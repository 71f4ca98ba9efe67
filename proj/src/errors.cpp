#include "clifangle/errors.hpp"

namespace clifangle {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::DegenerateSpan:
      return "DegenerateSpan";
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::ZeroBlade:
      return "ZeroBlade";
    case ErrorKind::GradeMismatch:
      return "GradeMismatch";
    case ErrorKind::NumericalFailure:
      return "NumericalFailure";
    case ErrorKind::SplitFailure:
      return "SplitFailure";
    case ErrorKind::ParseError:
      return "ParseError";
  }
  return "Unknown";
}

}  // namespace clifangle
