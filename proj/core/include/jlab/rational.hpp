#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace jlab {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "-3/4", "2.9", "1.5e-3" exactly. Throws ArgumentError.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when q = 1.
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

}  // namespace jlab
