#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace normhol {

/// Exact rational scalar (GMP backed, always kept canonical).
using Rational = mpq_class;

/// Relative tolerance attached to float64 computations. Ignored in exact mode.
struct Tolerance {
  double rel = 1e-9;
};

template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x, double /*scale*/, Tolerance /*tol*/) {
    return sgn(x) == 0;
  }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_ratio(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x, double scale, Tolerance tol) {
    return std::fabs(x) <= tol.rel * (scale > 1.0 ? scale : 1.0);
  }
  static double magnitude(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long n, long d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
};

/// Serializes as "a/b" with b > 0 and gcd(a, b) = 1.
std::string to_fraction_string(const Rational& x);

/// Accepts "a/b", "a", or a decimal literal like "0.25" (converted exactly).
Rational parse_rational(std::string_view text);

/// Best rational approximation by continued fractions: stops at the first
/// convergent within `abs_tol` of x, never exceeding `max_denominator`.
Rational rationalize(double x, double abs_tol = 1e-10,
                     std::int64_t max_denominator = 1000000);

inline Rational to_rational(const Rational& x) { return x; }

template <Scalar T>
T convert_scalar(const Rational& x) {
  if constexpr (std::same_as<T, Rational>) {
    return x;
  } else {
    return x.get_d();
  }
}

}  // namespace normhol
