#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nre {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

// Throws Error(Overflow) when the value does not fit.
std::uint64_t to_u64(const BigInt& value);
std::int64_t to_i64(const BigInt& value);

std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

}  // namespace nre
