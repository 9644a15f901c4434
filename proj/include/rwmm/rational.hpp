#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace rwmm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact probability. Always kept in lowest terms with a positive denominator.
using MeasureValue = Rational;

/// Accepts "3", "-2", "1/2" and finite decimals such as "0.25".
Rational parse_rational(std::string_view text);

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace rwmm
