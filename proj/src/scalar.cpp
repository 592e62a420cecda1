#include "parrondo/scalar.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "parrondo/errors.hpp"

namespace parrondo {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Integer value{std::string(s)};
  if (negative) value = -value;
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num_text = text.substr(0, slash);
  const std::string_view den_text =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num_text) || !is_integer_literal(den_text)) {
    throw ParseError("malformed rational literal: '" + std::string(text) + "'");
  }
  const Integer den = parse_integer(den_text);
  if (den == 0) {
    throw ParseError("zero denominator in rational literal: '" + std::string(text) + "'");
  }
  // The (num, den) constructor canonicalizes.
  return Rational(parse_integer(num_text), den);
}

std::string to_string(const Rational& x) {
  const Integer den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

double to_float(const Rational& x) {
  using boost::multiprecision::msb;
  const Integer num = boost::multiprecision::numerator(x);
  if (num == 0) return 0.0;
  const Integer n = abs(num);
  const Integer d = boost::multiprecision::denominator(x);

  // Scale so the integer quotient carries 54 or 55 significant bits.
  const long k = 54 - (static_cast<long>(msb(n)) - static_cast<long>(msb(d)));
  const Integer scaled_n = k >= 0 ? Integer(n << k) : n;
  const Integer scaled_d = k >= 0 ? d : Integer(d << -k);
  Integer q;
  Integer r;
  boost::multiprecision::divide_qr(scaled_n, scaled_d, q, r);

  const long extra = static_cast<long>(msb(q)) + 1 - 53;
  const Integer low = q & ((Integer(1) << extra) - 1);
  const Integer half = Integer(1) << (extra - 1);
  q >>= extra;
  const bool round_up =
      low > half || (low == half && (r != 0 || boost::multiprecision::bit_test(q, 0)));
  if (round_up) q += 1;

  const double magnitude = std::ldexp(q.convert_to<double>(), static_cast<int>(extra - k));
  return num < 0 ? -magnitude : magnitude;
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite double to a rational");
  return Rational(x);
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), result.ptr);
}

int sign(const Rational& x) { return x.sign(); }

int sign(double x, double dead_zone) {
  if (x > dead_zone) return 1;
  if (x < -dead_zone) return -1;
  return 0;
}

}  // namespace parrondo
