#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xcop {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Largest integer not exceeding x.
Integer floor_int(const Rational& x);
Rational floor(const Rational& x);

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
Rational from_double(double x);

/// Accepts "p/q", integers, and decimals with optional exponent ("0.3", "1e-3").
/// Decimals are converted exactly (0.3 -> 3/10).
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& x);

std::vector<double> to_doubles(const std::vector<Rational>& xs);

}  // namespace xcop
