#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nre {

enum class ErrorKind {
  RhoTooSmall,
  IndexOutOfRange,
  MixedShapes,
  ShapeMismatch,
  BudgetExceeded,
  PredictionFailed,
  HypothesisUnmet,
  InvalidArgument,
  Overflow,
  Io,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nre
