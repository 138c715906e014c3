#include "jlab/rational.hpp"

#include "jlab/errors.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace jlab {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ArgumentError("invalid rational '" + std::string(whole) + "'");
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ArgumentError("invalid rational '" + std::string(whole) + "'");
    }
  }
  return cpp_int(std::string(digits));
}

cpp_int pow10(long e) {
  cpp_int p = 1;
  for (long i = 0; i < e; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(s.substr(0, slash), text);
    const cpp_int den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string exp_text(s.substr(e + 1));
      std::size_t used = 0;
      try {
        exponent = std::stol(exp_text, &used);
      } catch (const std::exception&) {
        throw ArgumentError("invalid exponent in '" + std::string(text) + "'");
      }
      if (used != exp_text.size() || std::abs(exponent) > 4000) {
        throw ArgumentError("invalid exponent in '" + std::string(text) + "'");
      }
      s = s.substr(0, e);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      int_part = s.substr(0, dot);
      frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
      throw ArgumentError("invalid rational '" + std::string(text) + "'");
    }
    const std::string digits = std::string(int_part) + std::string(frac_part);
    const cpp_int mantissa = parse_integer(digits, text);
    exponent -= static_cast<long>(frac_part.size());
    value = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                          : Rational(mantissa, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ArgumentError("cannot convert a non-finite value to a rational");
  return Rational(x);
}

}  // namespace jlab
