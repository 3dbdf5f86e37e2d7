#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace covcert {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Floor division a/b for b > 0 (cpp_int's operator/ truncates toward zero).
Int floor_div(const Int& a, const Int& b);

Int floor_rat(const Rat& r);
Int ceil_rat(const Rat& r);

/// base^exp by repeated squaring; exp is small (an exponent, not data).
Int pow_int(const Int& base, unsigned exp);

/// Largest s >= 0 with s^j <= a.  Requires a >= 0, j >= 1.
Int nth_root_floor(const Int& a, unsigned j);
/// Smallest s >= 0 with s^j >= a.
Int nth_root_ceil(const Int& a, unsigned j);

/// Outward-rounded rational bounds on a^{1/j} for a >= 0.
/// root_upper(a,j,bits)^j >= a and root_lower(a,j,bits)^j <= a, with
/// upper - lower <= 2^(1-bits).  Both have denominator 2^bits: the bisection
/// runs on the scaled integer a*2^(j*bits), so every comparison is exact.
Rat root_upper(const Rat& a, unsigned j, unsigned bits);
Rat root_lower(const Rat& a, unsigned j, unsigned bits);

/// Parses "p/q" or "p" with optional sign; throws std::invalid_argument on
/// malformed input or zero denominator.
Rat parse_rational(const std::string& s);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string rat_to_string(const Rat& r);

}  // namespace covcert
