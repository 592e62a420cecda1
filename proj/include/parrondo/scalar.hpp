#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <concepts>
#include <string>
#include <string_view>

namespace parrondo {

/// Exact rational backed by GMP. Always held in canonical form.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Float64 = double;

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  /// Row sums of a float transition matrix may miss 1 by this much.
  static constexpr double row_sum_tolerance = 1e-12;
  /// |mu| at or below this is classified fair.
  static constexpr double fair_tolerance = 1e-12;
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::exact; };

/// Parses "int" or "int/int" (optional leading sign on the numerator).
/// Throws ParseError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& x);

/// Nearest double (round-half-even) to the exact value.
double to_float(const Rational& x);

/// Exact value of a finite double.
Rational to_rational(double x);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

int sign(const Rational& x);
int sign(double x, double dead_zone = 0.0);

/// Converts an exact value into the requested backend.
template <Scalar S>
S from_rational(const Rational& x) {
  if constexpr (std::same_as<S, Rational>) {
    return x;
  } else {
    return to_float(x);
  }
}

inline double as_double(const Rational& x) { return to_float(x); }
inline double as_double(double x) { return x; }

}  // namespace parrondo
