#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dlive {

/// Exact arbitrary-precision rational number.
using Rational = mpq_class;

/// Parses "n" or "n/d" (optional leading '-'). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "n" or "n/d" text.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Rational floor(const Rational& r);
Rational ceil(const Rational& r);

/// Largest multiple of 2^-bits that is <= r.
Rational floor_dyadic(const Rational& r, unsigned bits);
/// Smallest multiple of 2^-bits that is >= r.
Rational ceil_dyadic(const Rational& r, unsigned bits);

/// A rational upper bound on sqrt(r), tight to roughly 2^-bits. Requires r >= 0.
Rational sqrt_upper(const Rational& r, unsigned bits = 20);

/// Converts a finite double exactly.
Rational from_double(double x);

}  // namespace dlive
