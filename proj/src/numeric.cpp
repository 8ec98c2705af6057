#include "nre/numeric.hpp"

#include <limits>

#include "nre/error.hpp"

namespace nre {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RhoTooSmall: return "RhoTooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MixedShapes: return "MixedShapes";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PredictionFailed: return "PredictionFailed";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::uint64_t to_u64(const BigInt& value) {
  if (value < 0 || value > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorKind::Overflow, "value " + value.str() + " does not fit in 64 unsigned bits");
  }
  return value.convert_to<std::uint64_t>();
}

std::int64_t to_i64(const BigInt& value) {
  if (value < std::numeric_limits<std::int64_t>::min() ||
      value > std::numeric_limits<std::int64_t>::max()) {
    throw Error(ErrorKind::Overflow, "value " + value.str() + " does not fit in 64 signed bits");
  }
  return value.convert_to<std::int64_t>();
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) {
    return numerator(value).str();
  }
  return numerator(value).str() + "/" + denominator(value).str();
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) {
      throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + text + "'");
    }
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e) != nullptr) throw;
    throw Error(ErrorKind::InvalidArgument, "not a rational: '" + text + "'");
  }
}

}  // namespace nre
