#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace tdt {

// Exact arithmetic for probabilities, costs and time labels. Finite doubles
// convert losslessly (every finite double is p/2^k), so values that came in
// through JSON round-trip exactly.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational rational_from_double(double x);
double to_double(const Rational& r);

// Exact decimal string when the denominator is of the form 2^a * 5^b,
// otherwise "p/q". Used for cost reporting.
std::string format_rational(const Rational& r);

}  // namespace tdt
