#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace nearcurve {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p" or a plain decimal like "0.25" into an exact rational.
BigRat parse_rational(const std::string& s);

/// Exact rational value of a finite double (doubles are dyadic rationals).
BigRat rational_from_double(double x);

double to_double(const BigRat& r);

/// floor(r) as a big integer.
BigInt rat_floor(const BigRat& r);

}  // namespace nearcurve
