#include <doctest.h>

#include "normhol/bbi.hpp"
#include "support.hpp"

using namespace normhol;
using testsupport::elementary_rotation;
using testsupport::so_basis;

namespace {

Matrix<Rational> block_diag(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

std::vector<Matrix<Rational>> so2_plus_so2() {
  return {block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(2, 2)),
          block_diag(Matrix<Rational>(2, 2), elementary_rotation(2, 0, 1))};
}

}  // namespace

TEST_CASE("displayed examples") {
  const auto t1 = construct_type<Rational>(BBIType::Type1, so_basis(2), 2);
  CHECK(t1.dim() == 4);
  CHECK(classify_bbi(t1).type == BBIType::Type1);
  const auto t2 = construct_type<Rational>(BBIType::Type2, so_basis(3), 3);
  const auto c2 = classify_bbi(t2);
  CHECK(c2.type == BBIType::Type2);
  CHECK(c2.m == 3);
  CHECK(c2.g.size() == 3);
  CHECK(construct_type<Rational>(BBIType::Type2, {}, 1).dim() == 1);
}

TEST_CASE("type 3 recovers phi") {
  const auto h = construct_type<Rational>(BBIType::Type3, so_basis(2), 2, {Rational(1)});
  for (const auto& x : h.basis) CHECK(is_metric_skew(x, h.gram));
  const auto c = classify_bbi(h);
  REQUIRE(c.type == BBIType::Type3);
  REQUIRE(c.phi.size() == 1);
  CHECK(c.phi[0] == 1);
  CHECK(c.g[0] == Matrix<Rational>{{0, 1}, {-1, 0}});
  const auto h3 = construct_type<Rational>(BBIType::Type3, so_basis(2), 2, {Rational(-3, 2)});
  CHECK(classify_bbi(h3).phi[0] == Rational(-3, 2));
}

TEST_CASE("type 4 recovers psi and ell") {
  const auto h = construct_type<Rational>(BBIType::Type4, so_basis(2), 3, {}, {{Rational(1)}}, 2);
  for (const auto& x : h.basis) CHECK(is_metric_skew(x, h.gram));
  const auto c = classify_bbi(h);
  REQUIRE(c.type == BBIType::Type4);
  CHECK(c.ell == 2);
  REQUIRE(c.psi.size() == 1);
  CHECK(c.psi[0] == Vector<Rational>{Rational(1)});

  const auto h2 = construct_type<Rational>(BBIType::Type4, so2_plus_so2(), 5, {},
                                           {{Rational(1)}, {Rational(2)}}, 4);
  const auto c2 = classify_bbi(h2);
  REQUIRE(c2.type == BBIType::Type4);
  CHECK(c2.ell == 4);
  CHECK(c2.psi[1] == Vector<Rational>{Rational(2)});
}

TEST_CASE("invalid epimorphisms") {
  CHECK_THROWS_AS(construct_type<Rational>(BBIType::Type3, so_basis(3), 3,
                                           {Rational(1), Rational(0), Rational(0)}),
                  InvalidEpimorphism);
  CHECK_THROWS_AS(construct_type<Rational>(BBIType::Type3, so_basis(2), 2, {Rational(0)}),
                  InvalidEpimorphism);
  CHECK_THROWS_AS(construct_type<Rational>(BBIType::Type4, so_basis(2), 4, {},
                                           {{Rational(1), Rational(0)}}, 2),
                  InvalidEpimorphism);
  CHECK_THROWS_AS(construct_type<Rational>(BBIType::Type4, {}, 2, {}, {}, 2), InvalidEpimorphism);
}

TEST_CASE("irreducible and decomposable inputs") {
  // full so(1,3)
  const SignatureSpace s(1, 2);
  std::vector<Matrix<Rational>> all;
  const auto g = s.gram<Rational>();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      Matrix<Rational> e(4, 4);
      e(i, j) = 1;
      e(j, i) = -1;
      all.push_back(g * e);  // G^{-1} times a skew matrix is gram-skew
    }
  const auto so13 = lie_closure(all, g);
  CHECK(so13.dim() == 6);
  CHECK(classify_bbi(so13).type == BBIType::Irreducible);

  StabilizerBlocks<Rational> b{Matrix<Rational>(1, 1), elementary_rotation(2, 0, 1),
                               Matrix<Rational>(2, 1), Matrix<Rational>(1, 1)};
  const auto rot = lie_closure({assemble_stabilizer(b, s)}, g);
  CHECK(classify_bbi(rot).type == BBIType::NotWeaklyIrreducible);
  CHECK_THROWS_AS(classify_bbi(lie_closure(so_basis(3), Matrix<Rational>::identity(3))),
                  SignatureMismatch);
}

TEST_CASE("classification is frame independent") {
  // conjugate a Type 3 algebra by a Lorentz transformation that moves the null line
  const auto h = construct_type<Rational>(BBIType::Type3, so_basis(2), 2, {Rational(2)});
  std::mt19937_64 rng(9);
  Matrix<Rational> x(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      x(i, j) = testsupport::rand_q(rng);
      x(j, i) = -x(i, j);
    }
  const auto gram = h.gram;
  const auto tau = cayley_transform(Matrix<Rational>(gram * x * Rational(1, 3)));
  CHECK(tau.transpose() * gram * tau == gram);
  std::vector<Matrix<Rational>> moved;
  const auto ti = inverse(tau);
  for (const auto& e : h.basis) moved.push_back(tau * e * ti);
  const auto c = classify_bbi(lie_closure(moved, gram));
  CHECK(c.type == BBIType::Type3);
  CHECK(c.m == 2);
}

TEST_CASE("lorentzian splitting") {
  const SignatureSpace s(1, 2);
  const auto zero = lorentzian_splitting(lie_closure<Rational>({}, s.gram<Rational>()));
  CHECK(zero.flat.dim() == 4);
  CHECK(zero.riemannian.empty());
  CHECK_FALSE(zero.lorentzian);

  StabilizerBlocks<Rational> b{Matrix<Rational>(1, 1), elementary_rotation(2, 0, 1),
                               Matrix<Rational>(2, 1), Matrix<Rational>(1, 1)};
  const auto rot = lorentzian_splitting(lie_closure({assemble_stabilizer(b, s)}, s.gram<Rational>()));
  CHECK(rot.riemannian.size() == 1);
  CHECK(rot.riemannian_irreducible[0]);
  CHECK(rot.flat.dim() == 2);
  CHECK_FALSE(rot.lorentzian);

  // Type 2 on R^{1,3} plus a trivial R^2
  const auto t2 = construct_type<Rational>(BBIType::Type2, so_basis(2), 2);
  const SignatureSpace big(1, 4);
  std::vector<Matrix<Rational>> embedded;
  const std::size_t idx[] = {0, 1, 2, 5};
  for (const auto& x : t2.basis) {
    Matrix<Rational> e(6, 6);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) e(idx[i], idx[j]) = x(i, j);
    embedded.push_back(e);
  }
  const auto split = lorentzian_splitting(lie_closure(embedded, big.gram<Rational>()));
  REQUIRE(split.lorentzian_class);
  CHECK(split.lorentzian_class->type == BBIType::Type2);
  CHECK(split.lorentzian_class->m == 2);
  CHECK(split.flat.dim() == 2);
  CHECK(split.riemannian.empty());
}
