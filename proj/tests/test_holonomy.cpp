#include <doctest.h>

#include "normhol/holonomy.hpp"
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

LieAlgebraSpan<Rational> euclidean(const std::vector<Matrix<Rational>>& gens, std::size_t n) {
  return lie_closure(gens, Matrix<Rational>::identity(n));
}

// so(2) x R^2 inside the stabilizer of v in R^{1,3}
LieAlgebraSpan<Rational> type2_so2() {
  const SignatureSpace s(1, 2);
  std::vector<Matrix<Rational>> gens;
  StabilizerBlocks<Rational> b{Matrix<Rational>(1, 1), elementary_rotation(2, 0, 1),
                               Matrix<Rational>(2, 1), Matrix<Rational>(1, 1)};
  gens.push_back(assemble_stabilizer(b, s));
  for (int j = 0; j < 2; ++j) {
    StabilizerBlocks<Rational> t{Matrix<Rational>(1, 1), Matrix<Rational>(2, 2),
                                 Matrix<Rational>(2, 1), Matrix<Rational>(1, 1)};
    t.x(j, 0) = 1;
    gens.push_back(assemble_stabilizer(t, s));
  }
  return lie_closure(gens, s.gram<Rational>());
}

CurvatureTable<Rational> constant_curvature(std::size_t n) {
  CurvatureTable<Rational> r;
  r.gram = Matrix<Rational>::identity(n);
  r.values.assign(n * n * n * n, Rational(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          r.at(a, b, c, d) = Rational((b == c && a == d) - (a == c && b == d));
  return r;
}

}  // namespace

TEST_CASE("lie closure") {
  CHECK(euclidean({elementary_rotation(3, 0, 1)}, 3).dim() == 1);
  const auto so3 = euclidean({elementary_rotation(3, 0, 1), elementary_rotation(3, 1, 2)}, 3);
  CHECK(so3.dim() == 3);
  CHECK(euclidean(so3.basis, 3).basis == so3.basis);
  for (const auto& x : so3.basis)
    for (const auto& y : so3.basis) CHECK(in_span(commutator(x, y), so3.basis));
}

TEST_CASE("generate holonomy") {
  const SignatureSpace s(0, 2);
  CHECK(generate_holonomy<Rational>({}, s).dim() == 0);
  ShapeFamily<Rational> f{2, s, {Matrix<Rational>{{1, 0}, {0, 0}}, Matrix<Rational>{{0, 1}, {1, 0}}}};
  const auto h = generate_holonomy<Rational>({olmos_tensor(f)}, s);
  CHECK(h.dim() == 1);
  ShapeFamily<Rational> c{2, s, {Matrix<Rational>{{1, 0}, {0, 0}}, Matrix<Rational>{{0, 0}, {0, 1}}}};
  CHECK(generate_holonomy<Rational>({olmos_tensor(c)}, s).dim() == 0);
}

TEST_CASE("generated holonomy of Xi-compatible data stabilizes Xi") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 4; ++t) {
    const auto f = testsupport::rand_family(rng, 1 + t % 2, 2, 3);
    std::vector<OlmosTensor<Rational>> rs{olmos_tensor(f)};
    rs.push_back(conjugate_tensor(rs[0], testsupport::rand_transport(rng, f.space)));
    const auto h = generate_holonomy(rs, f.space);
    for (const auto& x : h.basis) {
      CHECK(is_metric_skew(x, f.space));
      CHECK_NOTHROW(stabilizer_blocks(x, f.space));
    }
  }
}

TEST_CASE("irreducible, decomposable and weakly irreducible algebras") {
  for (std::size_t q = 2; q <= 4; ++q) {
    const auto rep = invariant_subspace_analysis(euclidean(so_basis(q), q));
    CHECK(rep.classification == Reducibility::Irreducible);
    CHECK(rep.commutant_dim == 1);
  }
  const auto blocks = euclidean({block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(2, 2)),
                                 block_diag(Matrix<Rational>(2, 2), elementary_rotation(2, 0, 1))},
                                4);
  const auto rep = invariant_subspace_analysis(blocks);
  REQUIRE(rep.classification == Reducibility::Decomposable);
  REQUIRE(rep.witness);
  const Matrix<Rational> first{{1, 0}, {0, 1}, {0, 0}, {0, 0}};
  const Matrix<Rational> second{{0, 0}, {0, 0}, {1, 0}, {0, 1}};
  CHECK((*rep.witness == Subspace<Rational>(first, 4) || *rep.witness == Subspace<Rational>(second, 4)));
  CHECK(is_invariant(*rep.witness, blocks.basis));
  CHECK(is_nondegenerate(*rep.witness, blocks.gram));
  CHECK(rep.summands.size() == 2);

  const auto t2 = invariant_subspace_analysis(type2_so2());
  CHECK(t2.classification == Reducibility::WeaklyIrreducible);
  REQUIRE(t2.isotropic);
  CHECK(*t2.isotropic == isotropic_subspace<Rational>(SignatureSpace(1, 2)));
}

TEST_CASE("indefinite splitting ignores nilpotent commutant elements") {
  // Null translations alone: the commutant contains a self-adjoint nilpotent
  // element but the space does not split beyond the trivial screen.
  const SignatureSpace s(1, 1);
  StabilizerBlocks<Rational> t{Matrix<Rational>(1, 1), Matrix<Rational>(1, 1),
                               Matrix<Rational>{{1}}, Matrix<Rational>(1, 1)};
  const auto h = lie_closure({assemble_stabilizer(t, s)}, s.gram<Rational>());
  const auto rep = invariant_subspace_analysis(h);
  CHECK(rep.classification == Reducibility::WeaklyIrreducible);
  CHECK(rep.commutant_dim >= 2);
}

TEST_CASE("trivial algebra splits into lines") {
  const auto rep = invariant_subspace_analysis(euclidean({}, 3));
  CHECK(rep.classification == Reducibility::Decomposable);
  CHECK(rep.summands.size() == 3);
  CHECK(rep.flat_part.dim() == 3);
}

TEST_CASE("borel-lichnerowicz") {
  const auto zero = borel_lichnerowicz(euclidean({}, 3));
  REQUIRE(zero.holds());
  CHECK(zero.decomposition->trivial_module.dim() == 3);
  CHECK(zero.decomposition->modules.empty());

  std::vector<Matrix<Rational>> gens;
  gens.push_back(block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(3, 3)));
  for (const auto& x : so_basis(3)) gens.push_back(block_diag(Matrix<Rational>(2, 2), x));
  const auto g = euclidean(gens, 5);
  const auto bl = borel_lichnerowicz(g);
  REQUIRE(bl.holds());
  const auto& d = *bl.decomposition;
  REQUIRE(d.modules.size() == 2);
  CHECK(d.trivial_module.dim() == 0);
  std::size_t sum = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    sum += d.modules[j].dim();
    CHECK(d.ideal_irreducible[j]);
    CHECK(d.ideals[j].dim() == (d.modules[j].dim() == 2 ? 1u : 3u));
  }
  CHECK(sum == 5);
  for (const auto& x : d.ideals[0].basis)
    for (const auto& y : d.ideals[1].basis) CHECK(commutator(x, y).is_zero());
  for (const auto& x : d.ideals[0].basis) CHECK((x * d.modules[1].basis()).is_zero());

  const auto diag = euclidean({block_diag(elementary_rotation(2, 0, 1), elementary_rotation(2, 0, 1))}, 4);
  const auto nobl = borel_lichnerowicz(diag);
  CHECK_FALSE(nobl.holds());
  REQUIRE(nobl.witness);
  CHECK(nobl.witness->modules.size() == 2);
}

TEST_CASE("screen scalar curvature") {
  const SignatureSpace s(0, 2);
  ShapeFamily<Rational> f{2, s, {Matrix<Rational>{{1, 0}, {0, 0}}, Matrix<Rational>{{0, 1}, {1, 0}}}};
  const auto r = restrict_tensor(olmos_tensor(f), Matrix<Rational>::identity(2));
  CHECK(screen_scalar_curvature(r) == -2);
  // rotated frame, non-orthonormal: scal is unchanged
  const Matrix<Rational> basis{{1, 1}, {0, 2}};
  CHECK(screen_scalar_curvature(restrict_tensor(olmos_tensor(f), basis)) == -2);
  CurvatureTable<Rational> z{Matrix<Rational>::identity(2), std::vector<Rational>(16, Rational(0))};
  CHECK(screen_scalar_curvature(z) == 0);
}

TEST_CASE("holonomy system check") {
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto rep = holonomy_system_check(constant_curvature(n), euclidean(so_basis(n), n));
    CHECK(rep.symmetric_flag);
    CHECK(rep.scal == Rational(static_cast<long>(n * n - n)));
  }
  CurvatureTable<Rational> z{Matrix<Rational>::identity(3), std::vector<Rational>(81, Rational(0))};
  const auto zr = holonomy_system_check(z, euclidean(so_basis(3), 3));
  CHECK_FALSE(zr.nonzero);
  CHECK_FALSE(zr.symmetric_flag);
  const auto blocks = euclidean({block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(2, 2))}, 4);
  const CurvatureTable<Rational> z4{Matrix<Rational>::identity(4), std::vector<Rational>(256, Rational(0))};
  CHECK_FALSE(holonomy_system_check(z4, blocks).irreducible);
  CHECK_THROWS_AS(holonomy_system_check(constant_curvature(3), euclidean({elementary_rotation(3, 0, 1)}, 3)),
                  TensorNotInAlgebra);
}

TEST_CASE("key lemma check") {
  std::vector<Matrix<Rational>> gens;
  gens.push_back(block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(3, 3)));
  for (const auto& x : so_basis(3)) gens.push_back(block_diag(Matrix<Rational>(2, 2), x));
  const auto bl = borel_lichnerowicz(euclidean(gens, 5));
  const auto k = keylemma_check(*bl.decomposition);
  REQUIRE(k.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(k[j].nonzero);
    CHECK(k[j].dim_k == (bl.decomposition->modules[j].dim() == 2 ? 1u : 6u));
  }
  CHECK(keylemma_check(*borel_lichnerowicz(euclidean({}, 2)).decomposition).empty());
}

TEST_CASE("borel-lichnerowicz in a generic rational frame") {
  // Conjugation gives commutant eigenvalues with large denominators.
  std::vector<Matrix<Rational>> gens;
  gens.push_back(block_diag(elementary_rotation(2, 0, 1), Matrix<Rational>(4, 4)));
  for (const auto& x : so_basis(3))
    gens.push_back(block_diag(Matrix<Rational>(2, 2), block_diag(x, Matrix<Rational>(1, 1))));
  std::mt19937_64 rng(41);
  const auto tau = testsupport::rand_transport(rng, SignatureSpace(0, 6));
  const auto ti = inverse(tau);
  for (auto& x : gens) x = tau * x * ti;
  const auto bl = borel_lichnerowicz(euclidean(gens, 6));
  REQUIRE(bl.holds());
  CHECK(bl.decomposition->modules.size() == 2);
  CHECK(bl.decomposition->trivial_module.dim() == 1);
  for (bool irreducible : bl.decomposition->ideal_irreducible) CHECK(irreducible);
}
