#include <doctest.h>

#include "normhol/curvature.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace normhol;
using testsupport::rand_family;

namespace {

Matrix<Rational> to_q(const oracle::Mat& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = Rational(static_cast<long>(m(i, j)));
  return out;
}

ShapeFamily<Rational> plane_pair() {
  ShapeFamily<Rational> f;
  f.tangent_dim = 2;
  f.space = SignatureSpace(0, 2);
  f.operators = {Matrix<Rational>{{1, 0}, {0, 0}}, Matrix<Rational>{{0, 1}, {1, 0}}};
  return f;
}

}  // namespace

TEST_CASE("normal curvature of a commuting family vanishes") {
  ShapeFamily<Rational> f;
  f.tangent_dim = 3;
  f.space = SignatureSpace(1, 1);
  f.operators = {Matrix<Rational>{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}},
                 Matrix<Rational>{{Rational(1, 2), 0, 0}, {0, 0, 0}, {0, 0, -1}},
                 Matrix<Rational>::identity(3)};
  const Vector<Rational> x{1, 2, 3}, y{0, 1, -1};
  CHECK(normal_curvature(f, x, y).is_zero());
  CHECK(olmos_tensor(f).is_zero());
}

TEST_CASE("normal curvature of the plane pair matches the hand bracket") {
  // [A1,A2] = [[0,1],[-1,0]], so <[A1,A2]e1,e2> = -1 and R(e1,e2) n1 = -n2.
  const auto f = plane_pair();
  const auto m = normal_curvature(f, Vector<Rational>{1, 0}, Vector<Rational>{0, 1});
  CHECK(m == Matrix<Rational>{{0, 1}, {-1, 0}});
  CHECK(is_metric_skew(m, f.space));
}

TEST_CASE("olmos tensor of the plane pair") {
  const auto r = olmos_tensor(plane_pair());
  // -1/2 Tr([A1,A2]^2) = 1
  CHECK(r.at(0, 1, 0, 1) == 1);
  CHECK(r.at(1, 0, 0, 1) == -1);
  CHECK(r.at(0, 1, 1, 0) == -1);
  CHECK(check_curvature_identities(r).all());
  CHECK(satisfies_trace_formula(r, plane_pair()));
}

TEST_CASE("random families satisfy the curvature identities exactly") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto f = rand_family(rng, t % 3, 1 + t % 3, 2 + t % 3);
    const auto r = olmos_tensor(f);
    CHECK(check_curvature_identities(r).all());
    CHECK(satisfies_trace_formula(r, f));
  }
}

TEST_CASE("conjugation") {
  std::mt19937_64 rng(5);
  const auto f = rand_family(rng, 1, 2, 3);
  const auto r = olmos_tensor(f);
  CHECK(conjugate_tensor(r, Matrix<Rational>::identity(4)) == r);
  const auto tau = testsupport::rand_transport(rng, f.space);
  const auto rt = conjugate_tensor(r, tau);
  CHECK(check_curvature_identities(rt).all());
  CHECK(conjugate_tensor(rt, inverse(tau)) == r);
  // operator form: tau^{-1} R(tau x, tau y) tau
  const Vector<Rational> x = testsupport::rand_vector(rng, 4), y = testsupport::rand_vector(rng, 4);
  CHECK(rt.operator_for(x, y) == inverse(tau) * r.operator_for(tau * x, tau * y) * tau);
  CHECK_THROWS_AS(conjugate_tensor(r, Matrix<Rational>::identity(4) * Rational(2)),
                  NonOrthogonalTransport);
}

TEST_CASE("screen components reconstruct the screen block") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 4; ++t) {
    const auto f = rand_family(rng, 2, 2, 3);
    const auto r = conjugate_tensor(olmos_tensor(f), testsupport::rand_transport(rng, f.space));
    const auto comp = extract_screen_components(r);
    for (int k = 0; k < 5; ++k) {
      const auto x1 = testsupport::rand_vector(rng, 6), x2 = testsupport::rand_vector(rng, 6);
      CHECK(screen_expansion(comp, x1, x2) == screen_block(r, x1, x2));
    }
  }
}

TEST_CASE("p = 0 screen components are the whole tensor") {
  const auto r = olmos_tensor(plane_pair());
  const auto comp = extract_screen_components(r);
  CHECK(comp.p.empty());
  CHECK(comp.q.empty());
  CHECK(comp.p0[0][1] == r.operator_at(0, 1));
}

TEST_CASE("tensor space dimensions agree with the brute-force oracle") {
  const std::size_t k_expected[] = {1, 6, 20};
  for (int n = 2; n <= 4; ++n) {
    std::vector<Matrix<Rational>> h;
    std::vector<oracle::Mat> hd = oracle::so_basis(n);
    for (const auto& m : hd) h.push_back(to_q(m));
    const auto k = curvature_space(h, n);
    CHECK(k.dim() == static_cast<std::size_t>(oracle::dim_K(hd, n)));
    CHECK(k.dim() == k_expected[n - 2]);
    CHECK(weak_curvature_space(h, n).dim() == static_cast<std::size_t>(oracle::dim_B(hd, n)));
    CHECK(is_weak_berger(h, n).weak_berger);
  }
  CHECK(weak_curvature_space(testsupport::so_basis(2), 2).dim() == 2);
  CHECK(weak_curvature_space(testsupport::so_basis(3), 3).dim() == 8);
  CHECK(curvature_space(std::vector<Matrix<Rational>>{}, 3).dim() == 0);
  CHECK(weak_curvature_space(std::vector<Matrix<Rational>>{}, 3).dim() == 0);
  CHECK(is_weak_berger(std::vector<Matrix<Rational>>{}, 3).weak_berger);
}

TEST_CASE("tensor spaces of subalgebras agree with the oracle") {
  // so(2) + so(2) block diagonal, so(3) in so(4), and a single u(1)-type rotation
  std::vector<std::vector<Matrix<Rational>>> cases = {
      {testsupport::elementary_rotation(4, 0, 1), testsupport::elementary_rotation(4, 2, 3)},
      {testsupport::elementary_rotation(4, 0, 1), testsupport::elementary_rotation(4, 0, 2),
       testsupport::elementary_rotation(4, 1, 2)},
      {testsupport::elementary_rotation(4, 0, 1) + testsupport::elementary_rotation(4, 2, 3)},
  };
  for (const auto& h : cases) {
    std::vector<oracle::Mat> hd;
    for (const auto& m : h) {
      oracle::Mat d(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d(i, j) = m(i, j).get_d();
      hd.push_back(d);
    }
    CHECK(curvature_space(h, 4).dim() == static_cast<std::size_t>(oracle::dim_K(hd, 4)));
    CHECK(weak_curvature_space(h, 4).dim() == static_cast<std::size_t>(oracle::dim_B(hd, 4)));
  }
}

TEST_CASE("curvature space elements satisfy Bianchi") {
  const auto k = curvature_space(testsupport::so_basis(3), 3);
  for (std::size_t i = 0; i < k.dim(); ++i) {
    const auto r = k.curvature_element(i);
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t z = 0; z < 3; ++z) {
          const auto ez = [](std::size_t j) {
            Vector<Rational> v(3, Rational(0));
            v[j] = 1;
            return v;
          };
          Vector<Rational> s = r[x][y] * ez(z);
          const auto b = r[y][z] * ez(x), c = r[z][x] * ez(y);
          for (std::size_t j = 0; j < 3; ++j) CHECK(s[j] + b[j] + c[j] == 0);
        }
  }
}

TEST_CASE("is_weak_berger rejects non-closed input") {
  CHECK_THROWS_AS(is_weak_berger(std::vector<Matrix<Rational>>{testsupport::elementary_rotation(3, 0, 1),
                                                                testsupport::elementary_rotation(3, 1, 2)},
                                 3),
                  NotLieClosed);
}

TEST_CASE("float mode agrees with exact mode") {
  std::mt19937_64 rng(23);
  const auto f = rand_family(rng, 1, 2, 3);
  ShapeFamily<double> fd{f.tangent_dim, f.space, {}};
  for (const auto& a : f.operators) fd.operators.push_back(convert_matrix<double>(a));
  const auto r = olmos_tensor(f);
  const auto rd = olmos_tensor(fd);
  CHECK(check_curvature_identities(rd).all());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      CHECK(rd.at(a, b, 0, 1) == doctest::Approx(r.at(a, b, 0, 1).get_d()));
}
