#include <doctest.h>

#include <cmath>
#include <numbers>

#include "examples.hpp"
#include "normhol/geometry.hpp"

using namespace normhol;
using namespace normhol::geometry;

namespace {

double rotation_cos(const Matrix<double>& tau, std::size_t fixed) {
  return (trace(tau) - static_cast<double>(fixed)) / 2.0;
}

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("jet derivatives of sin(u0) exp(u1)") {
  const auto f = examples::op("*", {examples::op("sin", {examples::var(0)}),
                                    examples::op("exp", {examples::var(1)})});
  const double a = 0.7, b = -0.3;
  const Jet j = f.evaluate({Jet::variable(a, 0, 2), Jet::variable(b, 1, 2)});
  const double s = std::sin(a), c = std::cos(a), e = std::exp(b);
  CHECK(j.value() == doctest::Approx(s * e).epsilon(1e-14));
  CHECK(j.d(0) == doctest::Approx(c * e).epsilon(1e-14));
  CHECK(j.d(1) == doctest::Approx(s * e).epsilon(1e-14));
  CHECK(j.dd(0, 0) == doctest::Approx(-s * e).epsilon(1e-14));
  CHECK(j.dd(0, 1) == doctest::Approx(c * e).epsilon(1e-14));
  CHECK(j.dd(1, 1) == doctest::Approx(s * e).epsilon(1e-14));

  const auto q = examples::op("/", {examples::op("pow", {examples::var(0), examples::num(3.0)}),
                                    examples::op("sqrt", {examples::var(1)})});
  const Jet k = q.evaluate({Jet::variable(2.0, 0, 2), Jet::variable(4.0, 1, 2)});
  // x^3 y^{-1/2}
  CHECK(k.value() == doctest::Approx(4.0));
  CHECK(k.d(0) == doctest::Approx(6.0));
  CHECK(k.d(1) == doctest::Approx(-0.5 * 8.0 / 8.0));
  CHECK(k.dd(0, 1) == doctest::Approx(-0.5 * 12.0 / 8.0));
  CHECK(k.dd(1, 1) == doctest::Approx(0.75 * 8.0 / 32.0));
}

TEST_CASE("expression validation") {
  CHECK_THROWS_AS(examples::op("tan", {examples::var(0)}).validate(1), InvalidInput);
  CHECK_THROWS_AS(examples::op("sin", {examples::var(0), examples::var(0)}).validate(1),
                  InvalidInput);
  CHECK_THROWS_AS(examples::var(2).validate(2), InvalidInput);
}

TEST_CASE("round sphere: A_H has eigenvalue 1/r^2") {
  for (double r : {0.5, 1.0, 2.0}) {
    const auto imm = sphere(r, 2, 3);
    for (auto method : {JetMethod::Automatic, JetMethod::FiniteDifference}) {
      const auto pj = point_jet(imm, {0.9, 0.4}, method);
      CHECK(pj.space == SignatureSpace(1, 0));
      const auto a = pj.shape_operator(pj.mean_curvature);
      const double tol = method == JetMethod::Automatic ? 1e-12 : 1e-5;
      CHECK(std::fabs(a(0, 0) - 1 / (r * r)) < tol);
      CHECK(std::fabs(a(1, 1) - 1 / (r * r)) < tol);
      CHECK(std::fabs(a(0, 1)) < tol);
      const auto g = pj.space.gram<double>();
      const auto f = pj.normal_frame;
      for (std::size_t i = 0; i < f.cols(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j)
          CHECK(std::fabs(eta(f.col(i), f.col(j)) - g(i, j)) < 1e-12);
    }
  }
}

TEST_CASE("finite difference jets converge at second order") {
  const auto imm = sphere(1.0, 2, 3);
  auto err = [&](double h) {
    const auto pj = point_jet(imm, {0.9, 0.4}, JetMethod::FiniteDifference, h);
    const auto a = pj.shape_operator(pj.mean_curvature);
    return std::max(std::fabs(a(0, 0) - 1), std::fabs(a(1, 1) - 1));
  };
  const double ratio = err(1e-3) / err(5e-4);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("custom expressions agree with the built-in sphere") {
  using examples::op;
  using examples::var;
  std::vector<Expr> c{examples::num(0.0),
                      op("cos", {var(0)}),
                      op("*", {op("sin", {var(0)}), op("cos", {var(1)})}),
                      op("*", {op("sin", {var(0)}), op("sin", {var(1)})})};
  const auto a = point_jet(custom(c, 2), {1.1, 2.0}, JetMethod::Automatic);
  const auto b = point_jet(sphere(1.0, 2, 3), {1.1, 2.0}, JetMethod::Automatic);
  for (std::size_t i = 0; i < a.shapes.operators.size(); ++i)
    CHECK(max_abs_diff(a.shapes.operators[i], b.shapes.operators[i]) < 1e-12);
}

TEST_CASE("degenerate parameter points are rejected") {
  CHECK_THROWS_AS(point_jet(sphere(1.0, 2, 3), {0.0, 0.3}), DegenerateMetric);
  const auto plane = affine({0.0, 0.0, 0.0}, {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  CHECK_THROWS_AS(point_jet(plane, {0.5, 0.3}), DegenerateMetric);
}

TEST_CASE("sphere normal transport is trivial and RK4 converges at fourth order") {
  const auto imm = sphere(1.0, 2, 3);
  const auto loop = examples::rectangle_loop({1.0, 0.5}, 0, 1, 0.4, 0.6);
  auto err = [&](std::size_t steps) {
    const auto t = parallel_transport(imm, loop, steps);
    return max_abs_diff(t.tau, Matrix<double>::identity(2));
  };
  CHECK(err(512) < 1e-10);
  const double ratio = err(64) / err(128);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("veronese surface: holonomy angle around a latitude cap") {
  const auto imm = examples::veronese();
  const auto pj = point_jet(imm, {1.0, 0.3}, JetMethod::Automatic);
  CHECK(pj.space == SignatureSpace(1, 2));
  // The normal curvature is a rotation of the e-plane by K = 2/3 on unit tangents.
  const auto rn = normal_curvature(pj.shapes, {1.0, 0.0}, {0.0, 1.0});
  CHECK(std::fabs(std::sqrt(-trace(rn * rn) / 2) - 2.0 / 3.0) < 1e-10);
  for (double theta0 : {0.4, 0.8, 1.2}) {
    const auto t = parallel_transport(imm, examples::latitude_loop(theta0, 64), 2048);
    const double omega = 2 * std::numbers::pi * (1 - std::cos(theta0));
    // Segments at constant theta trace the latitude circle exactly.
    CHECK(std::fabs(rotation_cos(t.tau, 2) - std::cos(2 * omega)) < 1e-8);
    CHECK(t.residual < 1e-8);
  }
}

TEST_CASE("light cone sections: V null, parallel, and A_V = -id") {
  for (bool codim3 : {false, true}) {
    const auto imm = light_cone_section(2, 1.5, {0.3, -0.2}, codim3, 0.2, 0.5);
    const std::vector<std::vector<double>> samples{{0.7, 0.2}, {1.1, 2.5}, {2.0, 4.0}};
    const auto loops = std::vector<std::vector<std::vector<double>>>{
        examples::rectangle_loop({1.0, 1.0}, 0, 1, 0.3, 0.5),
        examples::latitude_loop(0.9, 48)};
    const auto rep = light_cone_check(imm, samples, loops, 512, true, JetMethod::Automatic);
    CHECK(rep.all_on_cone);
    for (const auto& s : rep.samples) {
      CHECK(std::fabs(s.vv) < 1e-9);
      CHECK(s.v_normal);
      CHECK(s.shape_residual < 1e-9);
    }
    for (double r : rep.loop_residuals) CHECK(r < 1e-6);
    const auto pj = point_jet(imm, {0.7, 0.2}, JetMethod::Automatic);
    CHECK(pj.space == SignatureSpace(1, codim3 ? 1 : 0));
  }
}

TEST_CASE("a translated cone is flagged") {
  auto imm = light_cone_section(2, 1.0, {}, false);
  const auto base = imm.map;
  imm.map = [base](const std::vector<Jet>& u) {
    auto x = base(u);
    x[1] = x[1] + 0.25;
    return x;
  };
  const auto rep = light_cone_check(imm, {{0.7, 0.2}});
  CHECK_FALSE(rep.all_on_cone);
  CHECK_THROWS_AS(light_cone_check(imm, {{0.7, 0.2}}, {}, 512, true), NotOnCone);
}

TEST_CASE("product of spheres has parallel second fundamental form") {
  const std::vector<double> radii{1.0, 2.0};
  const auto imm = product_spheres(radii, {1, 2}, 6);
  const std::vector<std::vector<double>> samples{
      {0.1, 0.7, 0.4}, {1.3, 1.1, 2.0}, {2.5, 0.5, 5.0}, {4.0, 2.2, 1.0}};
  const auto rep = parallel_pi_check(imm, samples);
  CHECK(rep.parallel);
  CHECK(rep.constant_spectrum);
  REQUIRE(rep.eigenvalues.size() == 2);
  const double n = 3.0;
  CHECK(rep.eigenvalues[0] == doctest::Approx(2.0 / (n * 4.0)).epsilon(1e-9));
  CHECK(rep.eigenvalues[1] == doctest::Approx(1.0 / n).epsilon(1e-9));

  const auto ver = parallel_pi_check(examples::veronese(), {{0.9, 0.3}, {1.4, 2.0}});
  CHECK(ver.parallel);
  const auto bumpy = light_cone_section(2, 1.0, {0.4, 0.0}, true, 0.1, 0.7);
  CHECK_FALSE(parallel_pi_check(bumpy, {{0.9, 0.3}}).parallel);
}

TEST_CASE("mean curvature cases") {
  const auto hyp = point_jet(hyperbolic(2, 1.0, 4), {0.3, -0.2}, JetMethod::Automatic);
  CHECK(mean_curvature_case(hyp).h_class == MeanCurvatureClass::Timelike);
  const auto sph = point_jet(sphere(1.0, 2, 4), {0.8, 0.2}, JetMethod::Automatic);
  const auto c = mean_curvature_case(sph);
  CHECK(c.h_class == MeanCurvatureClass::Spacelike);
  CHECK_FALSE(c.contradiction);
  // Inject a null normal vector in place of H.
  const auto v = sph.normal_frame.col(0);
  const auto injected = mean_curvature_case(sph, v);
  CHECK(injected.h_class == MeanCurvatureClass::Null);
  CHECK(injected.contradiction);
}
