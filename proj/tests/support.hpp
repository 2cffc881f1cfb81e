#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "normhol/curvature.hpp"

namespace testsupport {

using normhol::Matrix;
using normhol::Rational;
using normhol::SignatureSpace;

inline Rational rand_q(std::mt19937_64& rng, int num = 3, int den = 3) {
  std::uniform_int_distribution<int> n(-num, num), d(1, den);
  Rational r(n(rng), d(rng));
  r.canonicalize();
  return r;
}

inline Matrix<Rational> rand_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix<Rational> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rand_q(rng);
  return m;
}

inline Matrix<Rational> rand_symmetric(std::mt19937_64& rng, std::size_t n) {
  Matrix<Rational> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rand_q(rng);
  return m;
}

inline Matrix<Rational> rand_skew(std::mt19937_64& rng, std::size_t n) {
  Matrix<Rational> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = rand_q(rng);
      m(j, i) = -m(i, j);
    }
  return m;
}

// Shape family whose v-directions act by multiples of the identity, so the
// resulting tensor annihilates Xi.
inline normhol::ShapeFamily<Rational> rand_family(std::mt19937_64& rng, std::size_t p,
                                                  std::size_t q, std::size_t m) {
  normhol::ShapeFamily<Rational> f;
  f.tangent_dim = m;
  f.space = SignatureSpace(p, q);
  for (std::size_t i = 0; i < f.space.dim(); ++i) {
    if (i < p)
      f.operators.push_back(Matrix<Rational>::identity(m) * rand_q(rng));
    else
      f.operators.push_back(rand_symmetric(rng, m));
  }
  return f;
}

inline Matrix<Rational> rand_stabilizer(std::mt19937_64& rng, const SignatureSpace& s) {
  normhol::StabilizerBlocks<Rational> b;
  b.a = rand_matrix(rng, s.p(), s.p());
  b.b = rand_skew(rng, s.q());
  b.x = rand_matrix(rng, s.q(), s.p());
  b.star = rand_skew(rng, s.p());
  return normhol::assemble_stabilizer(b, s);
}

// Gram-orthogonal rational matrix preserving Xi (Cayley transform of a
// scaled stabilizer element; scaling keeps I - X invertible in practice).
inline Matrix<Rational> rand_transport(std::mt19937_64& rng, const SignatureSpace& s) {
  for (;;) {
    const auto x = rand_stabilizer(rng, s) * Rational(1, 4);
    try {
      return normhol::cayley_transform(x);
    } catch (const normhol::InvalidInput&) {
    }
  }
}

inline std::vector<Rational> rand_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = rand_q(rng);
  return v;
}

inline Matrix<Rational> elementary_rotation(std::size_t n, std::size_t i, std::size_t j) {
  Matrix<Rational> m(n, n);
  m(i, j) = 1;
  m(j, i) = -1;
  return m;
}

inline std::vector<Matrix<Rational>> so_basis(std::size_t n) {
  std::vector<Matrix<Rational>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(elementary_rotation(n, i, j));
  return out;
}

}  // namespace testsupport
