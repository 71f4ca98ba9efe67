#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clifangle {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  DegenerateSpan,
  RankDeficient,
  ZeroBlade,
  GradeMismatch,
  NumericalFailure,
  SplitFailure,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; the kind decides how the CLI maps it
// onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace clifangle
