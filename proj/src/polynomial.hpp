#pragma once

// Univariate polynomials over Q, coefficients stored low degree first.

#include <vector>

#include "normhol/matrix.hpp"

namespace normhol::poly {

using Poly = std::vector<Rational>;

void trim(Poly& p);
int degree(const Poly& p);  // -1 for the zero polynomial
Poly monic(Poly p);
Poly derivative(const Poly& p);
Poly multiply(const Poly& a, const Poly& b);
/// Quotient and remainder of a / b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);  // monic
Rational evaluate(const Poly& p, const Rational& x);

/// Number of distinct real roots (Sturm sequence).
int real_root_count(const Poly& p);
/// Distinct rational roots, found by numeric isolation and exact verification.
std::vector<Rational> rational_roots(const Poly& p);

/// Minimal polynomial of a square matrix (monic).
Poly minimal_polynomial(const Matrix<Rational>& c);
/// p(C).
Matrix<Rational> apply(const Poly& p, const Matrix<Rational>& c);

/// Squarefree part p / gcd(p, p').
Poly radical(const Poly& p);
/// Number of factors of the radical that are irreducible over R.
int real_factor_count(const Poly& p);

}  // namespace normhol::poly
