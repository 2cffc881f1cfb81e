#include "normhol/scalar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "normhol/errors.hpp"

namespace normhol {

std::string to_fraction_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw InvalidInput("empty rational literal");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos)
        throw InvalidInput("unsupported rational literal '" + s + "'");
      const bool neg = s.front() == '-';
      std::string digits = s.substr(neg || s.front() == '+' ? 1 : 0);
      const auto d = digits.find('.');
      const std::string frac = digits.substr(d + 1);
      std::string whole = digits.substr(0, d) + frac;
      if (whole.empty()) throw InvalidInput("bad decimal '" + s + "'");
      mpz_class num(whole, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational r(neg ? mpz_class(-num) : num, den);
      r.canonicalize();
      return r;
    }
    Rational r(s, 10);
    if (r.get_den() == 0) throw InvalidInput("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw InvalidInput("malformed rational literal '" + s + "'");
  }
}

Rational rationalize(double x, double abs_tol, std::int64_t max_denominator) {
  if (!std::isfinite(x)) throw InvalidInput("cannot rationalize a non-finite value");
  const bool neg = x < 0;
  const double ax = std::fabs(x);
  // convergents h/k of the continued fraction of ax
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(ax));
  mpz_class k_prev = 0, k = 1;
  double rem = ax - std::floor(ax);
  Rational best(h, k);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::fabs(best.get_d() - ax) <= abs_tol || rem <= 0.0) break;
    const double inv = 1.0 / rem;
    const long a = static_cast<long>(std::floor(inv));
    rem = inv - static_cast<double>(a);
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best = Rational(h, k);
  }
  best.canonicalize();
  return neg ? Rational(-best) : best;
}

}  // namespace normhol
