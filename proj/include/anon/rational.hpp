#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace anon {

// All distances, distributions and thresholds are exact rationals; several
// closeness checks sit exactly on the boundary (EMD == t), so floating point
// is never used anywhere in the library.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p/q", plain integers, and terminating decimals ("0.3" -> 3/10).
Rational parse_rational(const std::string& text);

// Canonical form: "p/q", or just "p" when the denominator is 1.
std::string format_rational(const Rational& value);

}  // namespace anon
