#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace formspec {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }
inline bool is_integer(const Rational& q) { return denom(q) == 1; }

/// Parses a non-negative decimal literal such as "7", "0.25".
std::optional<Rational> parse_decimal(std::string_view text);

/// Integer or terminating decimal text when possible, else "p / q".
std::string to_string(const Rational& q);

/// True when q has a finite decimal expansion.
bool is_terminating(const Rational& q);

}  // namespace formspec
