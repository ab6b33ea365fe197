#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace triadica {

/// Exact rational scalar. GMP keeps values canonical (reduced, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;

using Vector = std::vector<Rational>;

/// Parses "p", "-p", "p/q" (ASCII or U+2212 minus). Throws ParseError on
/// anything else, including zero denominators and decimal notation.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);
bool is_zero(const Vector& v);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);

}  // namespace triadica
