#pragma once

#include <cmath>
#include <numbers>

#include "normhol/geometry.hpp"

// Immersions with known closed-form invariants, shared by tests and the
// acceptance runner.
namespace examples {

using normhol::geometry::Expr;

inline Expr num(double c) {
  Expr e;
  e.kind = Expr::Kind::Constant;
  e.constant = c;
  return e;
}

inline Expr var(std::size_t i) {
  Expr e;
  e.kind = Expr::Kind::Variable;
  e.variable = i;
  return e;
}

inline Expr op(std::string name, std::vector<Expr> args) {
  Expr e;
  e.kind = Expr::Kind::Op;
  e.op = std::move(name);
  e.args = std::move(args);
  return e;
}

/// Veronese surface of S^2 into R^5 (time coordinate zero), angles (theta, phi).
/// Normal curvature is constant; the rotation angle of normal holonomy around a
/// latitude cap of solid angle Omega is 2 Omega.
inline normhol::geometry::Immersion veronese() {
  const Expr x = op("cos", {var(0)});
  const Expr y = op("*", {op("sin", {var(0)}), op("cos", {var(1)})});
  const Expr z = op("*", {op("sin", {var(0)}), op("sin", {var(1)})});
  const double r3 = std::sqrt(3.0);
  auto sq = [](const Expr& a) { return op("*", {a, a}); };
  std::vector<Expr> c{
      num(0.0),
      op("*", {num(r3), x, y}),
      op("*", {num(r3), y, z}),
      op("*", {num(r3), z, x}),
      op("*", {num(r3 / 2), op("-", {sq(x), sq(y)})}),
      op("*", {num(0.5), op("-", {op("+", {sq(x), sq(y)}), op("*", {num(2.0), sq(z)})})}),
  };
  return normhol::geometry::custom(std::move(c), 2);
}

/// Latitude theta = theta0 from phi0 to phi0 + 2 pi (both ends included).
inline std::vector<std::vector<double>> latitude_loop(double theta0, std::size_t points,
                                                      double phi0 = 0.0) {
  std::vector<std::vector<double>> loop;
  for (std::size_t i = 0; i <= points; ++i)
    loop.push_back({theta0, phi0 + 2 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(points)});
  return loop;
}

/// Rectangle loop in parameter space around `center`.
inline std::vector<std::vector<double>> rectangle_loop(const std::vector<double>& center,
                                                       std::size_t i, std::size_t j, double a,
                                                       double b) {
  auto p = [&](double s, double t) {
    auto q = center;
    q[i] += s;
    q[j] += t;
    return q;
  };
  return {p(-a, -b), p(a, -b), p(a, b), p(-a, b)};
}

}  // namespace examples
