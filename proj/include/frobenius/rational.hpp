#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace frobenius {

using Rational = mpq_class;

/// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);

/// Parses "3", "-1/3", "0.25", "2.5e-3". Throws ArgumentError otherwise.
Rational parse_rational(std::string_view text);

Rational abs(const Rational& x);

std::string to_string(const Rational& x);

}  // namespace frobenius
