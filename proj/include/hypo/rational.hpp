// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace hypo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p", "-p", "p/q" with arbitrary-size integers.
Rational parse_rational(const std::string& text);

// Exact value of a double that is a dyadic rational with denominator at most
// max_den; otherwise nullopt. Integers of any representable size qualify.
std::optional<Rational> exact_dyadic(double x, unsigned max_den_log2 = 16);

double to_double(const Rational& q);
double to_double(const BigInt& z);

// Natural log of |q| for q != 0, without under/overflow for huge operands.
double log_abs(const Rational& q);

BigInt floor_of(const Rational& q);

// Nearest integer with half-integers rounded away from zero.
BigInt round_half_away(const Rational& q);

// min(q - floor q, ceil q - q): both neighbours are examined.
Rational dist_to_integer(const Rational& q);

std::string to_string(const Rational& q);

}  // namespace hypo
