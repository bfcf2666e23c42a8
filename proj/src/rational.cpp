// SPDX-License-Identifier: Apache-2.0
#include "hypo/rational.hpp"

#include "hypo/numeric.hpp"

#include <cmath>

namespace hypo {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '_') s.push_back(c);
  if (s.empty()) throw InputError("empty rational literal");
  auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    std::size_t i = (part.size() > 0 && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw InputError("malformed rational literal '" + text + "'");
    for (std::size_t k = i; k < part.size(); ++k)
      if (part[k] < '0' || part[k] > '9') throw InputError("malformed rational literal '" + text + "'");
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  BigInt p = parse_int(s.substr(0, slash));
  BigInt q = parse_int(s.substr(slash + 1));
  if (q == 0) throw InputError("zero denominator in '" + text + "'");
  return Rational(p, q);
}

std::optional<Rational> exact_dyadic(double x, unsigned max_den_log2) {
  if (!std::isfinite(x)) return std::nullopt;
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53-bit integer mantissa m with x = m * 2^(exp - 53)
  auto m = static_cast<long long>(std::ldexp(mant, 53));
  int shift = exp - 53;
  BigInt num(m);
  if (shift >= 0) return Rational(num << shift);
  BigInt den = BigInt(1) << (-shift);
  Rational q(num, den);
  BigInt d = denominator(q);
  if (d > (BigInt(1) << max_den_log2)) return std::nullopt;
  return q;
}

double to_double(const BigInt& z) { return z.convert_to<double>(); }

double to_double(const Rational& q) {
  // convert_to handles wide operands with correct rounding
  return q.convert_to<double>();
}

namespace {
double log_abs_int(const BigInt& z) {
  BigInt a = z < 0 ? BigInt(-z) : z;
  std::size_t bits = boost::multiprecision::msb(a) + 1;
  if (bits <= 1000) return std::log(a.convert_to<double>());
  std::size_t drop = bits - 60;
  BigInt top = a >> drop;
  return std::log(top.convert_to<double>()) + static_cast<double>(drop) * std::log(2.0);
}
}  // namespace

double log_abs(const Rational& q) {
  if (q == 0) throw std::domain_error("log of zero rational");
  return log_abs_int(numerator(q)) - log_abs_int(denominator(q));
}

BigInt floor_of(const Rational& q) {
  BigInt n = numerator(q);
  BigInt d = denominator(q);  // positive
  BigInt f = n / d;           // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

BigInt round_half_away(const Rational& q) {
  Rational half(1, 2);
  if (q >= 0) return floor_of(q + half);
  return -floor_of(-q + half);
}

Rational dist_to_integer(const Rational& q) {
  Rational lo = q - Rational(floor_of(q));
  Rational hi = Rational(1) - lo;
  if (lo == 0) return Rational(0);
  return lo < hi ? lo : hi;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace hypo
