#include "normhol/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace normhol::geometry {

// ---------------------------------------------------------------------------
// Jet arithmetic

Jet& Jet::operator+=(const Jet& o) {
  v_ += o.v_;
  for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  v_ -= o.v_;
  for (std::size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  const std::size_t k = size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      h_[i * k + j] = v_ * o.h_[i * k + j] + o.v_ * h_[i * k + j] + g_[i] * o.g_[j] +
                      o.g_[i] * g_[j];
  for (std::size_t i = 0; i < k; ++i) g_[i] = v_ * o.g_[i] + o.v_ * g_[i];
  v_ *= o.v_;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  const double x = o.v_;
  if (x == 0.0) throw InvalidInput("division by zero in expression");
  return *this *= o.apply(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

Jet operator-(Jet a) {
  a.v_ = -a.v_;
  for (auto& x : a.g_) x = -x;
  for (auto& x : a.h_) x = -x;
  return a;
}

Jet Jet::apply(double f, double df, double ddf) const {
  Jet out(f, size());
  const std::size_t k = size();
  for (std::size_t i = 0; i < k; ++i) out.g_[i] = df * g_[i];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out.h_[i * k + j] = df * h_[i * k + j] + ddf * g_[i] * g_[j];
  return out;
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.apply(s, c, -s);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.apply(c, -s, -c);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  return x.apply(e, e, e);
}

Jet log(const Jet& x) {
  const double v = x.value();
  if (v <= 0.0) throw InvalidInput("log of a non-positive value");
  return x.apply(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet sqrt(const Jet& x) {
  const double v = x.value();
  if (v <= 0.0) throw InvalidInput("sqrt of a non-positive value");
  const double s = std::sqrt(v);
  return x.apply(s, 0.5 / s, -0.25 / (s * v));
}

Jet pow(const Jet& x, double p) {
  const double v = x.value();
  if (p == 0.0) return Jet(1.0, x.size());
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return x.apply(std::pow(v, p), p * std::pow(v, p - 1), p * (p - 1) * std::pow(v, p - 2));
}

Jet pow(const Jet& x, const Jet& p) {
  bool constant = true;
  for (std::size_t i = 0; i < p.size(); ++i) constant = constant && p.d(i) == 0.0;
  for (std::size_t i = 0; i < p.size() && constant; ++i)
    for (std::size_t j = 0; j < p.size(); ++j) constant = constant && p.dd(i, j) == 0.0;
  if (constant) return pow(x, p.value());
  return exp(p * log(x));
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

std::size_t arity(const std::string& op) {
  if (op == "+" || op == "*") return 0;  // variadic, at least one
  if (op == "-") return 0;
  if (op == "/" || op == "pow") return 2;
  if (op == "sin" || op == "cos" || op == "exp" || op == "sqrt") return 1;
  throw InvalidInput("unknown operator '" + op + "'");
}

}  // namespace

void Expr::validate(std::size_t parameter_dim) const {
  switch (kind) {
    case Kind::Constant:
      if (!std::isfinite(constant)) throw InvalidInput("non-finite constant");
      return;
    case Kind::Variable:
      if (variable >= parameter_dim)
        throw InvalidInput("variable u" + std::to_string(variable) + " out of range");
      return;
    case Kind::Op: {
      const std::size_t n = arity(op);
      if (n == 0 ? args.empty() : args.size() != n)
        throw InvalidInput("wrong number of arguments for '" + op + "'");
      for (const auto& a : args) a.validate(parameter_dim);
    }
  }
}

Jet Expr::evaluate(const std::vector<Jet>& u) const {
  const std::size_t k = u.empty() ? 0 : u.front().size();
  switch (kind) {
    case Kind::Constant:
      return Jet(constant, k);
    case Kind::Variable:
      return u.at(variable);
    case Kind::Op:
      break;
  }
  std::vector<Jet> a;
  a.reserve(args.size());
  for (const auto& e : args) a.push_back(e.evaluate(u));
  if (op == "+") {
    Jet s = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i];
    return s;
  }
  if (op == "*") {
    Jet s = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) s *= a[i];
    return s;
  }
  if (op == "-") {
    if (a.size() == 1) return -a[0];
    Jet s = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) s -= a[i];
    return s;
  }
  if (op == "/") return a[0] / a[1];
  if (op == "pow") return pow(a[0], a[1]);
  if (op == "sin") return sin(a[0]);
  if (op == "cos") return cos(a[0]);
  if (op == "exp") return exp(a[0]);
  if (op == "sqrt") return sqrt(a[0]);
  throw InvalidInput("unknown operator '" + op + "'");
}

// ---------------------------------------------------------------------------
// Immersions

std::vector<Jet> Immersion::jet(const std::vector<double>& u) const {
  if (u.size() != parameter_dim) throw DimensionMismatch("parameter vector size");
  std::vector<Jet> vars;
  for (std::size_t i = 0; i < u.size(); ++i) vars.push_back(Jet::variable(u[i], i, u.size()));
  auto x = map(vars);
  if (x.size() != ambient_dim + 1) throw DimensionMismatch("immersion output size");
  return x;
}

std::vector<double> Immersion::evaluate(const std::vector<double>& u) const {
  std::vector<double> out;
  for (const auto& j : jet(u)) out.push_back(j.value());
  return out;
}

namespace {

/// Unit vector in R^{n+1} from hyperspherical angles.
std::vector<Jet> sphere_point(const std::vector<Jet>& u) {
  const std::size_t n = u.size();
  const std::size_t k = n == 0 ? 0 : u[0].size();
  std::vector<Jet> s;
  Jet prod(1.0, k);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(prod * cos(u[i]));
    prod = prod * sin(u[i]);
  }
  s.push_back(prod);
  return s;
}

Jet zero_like(const std::vector<Jet>& u) { return Jet(0.0, u.empty() ? 0 : u[0].size()); }

}  // namespace

Immersion affine(std::vector<double> origin, std::vector<std::vector<double>> directions) {
  if (origin.size() < 2) throw DimensionMismatch("affine origin too short");
  for (const auto& d : directions)
    if (d.size() != origin.size()) throw DimensionMismatch("affine direction size");
  Immersion imm;
  imm.family = "affine";
  imm.ambient_dim = origin.size() - 1;
  imm.parameter_dim = directions.size();
  imm.map = [origin, directions](const std::vector<Jet>& u) {
    std::vector<Jet> x;
    for (std::size_t c = 0; c < origin.size(); ++c) {
      Jet s = zero_like(u) + origin[c];
      for (std::size_t i = 0; i < directions.size(); ++i) s += u[i] * directions[i][c];
      x.push_back(s);
    }
    return x;
  };
  return imm;
}

Immersion sphere(double radius, std::size_t dim, std::size_t ambient_dim) {
  if (radius <= 0.0) throw InvalidInput("sphere radius must be positive");
  if (dim == 0 || ambient_dim < dim + 1) throw DimensionMismatch("sphere does not fit");
  Immersion imm;
  imm.family = "sphere";
  imm.ambient_dim = ambient_dim;
  imm.parameter_dim = dim;
  imm.map = [radius, ambient_dim](const std::vector<Jet>& u) {
    std::vector<Jet> x(ambient_dim + 1, zero_like(u));
    const auto s = sphere_point(u);
    for (std::size_t i = 0; i < s.size(); ++i) x[1 + i] = s[i] * radius;
    return x;
  };
  return imm;
}

Immersion product_spheres(std::vector<double> radii, std::vector<std::size_t> dims,
                          std::size_t ambient_dim) {
  if (radii.size() != dims.size() || radii.empty())
    throw DimensionMismatch("radii and dims must have the same nonzero length");
  std::size_t need = 0, n = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (radii[i] <= 0.0 || dims[i] == 0) throw InvalidInput("invalid sphere factor");
    need += dims[i] + 1;
    n += dims[i];
  }
  if (ambient_dim < need) throw DimensionMismatch("product of spheres does not fit");
  Immersion imm;
  imm.family = "product_spheres";
  imm.ambient_dim = ambient_dim;
  imm.parameter_dim = n;
  imm.map = [radii, dims, ambient_dim](const std::vector<Jet>& u) {
    std::vector<Jet> x(ambient_dim + 1, zero_like(u));
    std::size_t offset = 0, slot = 1;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      std::vector<Jet> part(u.begin() + offset, u.begin() + offset + dims[f]);
      const auto s = sphere_point(part);
      for (const auto& c : s) x[slot++] = c * radii[f];
      offset += dims[f];
    }
    return x;
  };
  return imm;
}

Immersion light_cone_section(std::size_t dim, double c, std::vector<double> a, bool codim3,
                             double rho, double warp) {
  if (dim == 0) throw DimensionMismatch("light cone section needs dim >= 1");
  if (c <= 0.0) throw InvalidInput("light cone scale must be positive");
  if (a.empty()) a.assign(dim, 0.0);
  if (a.size() != dim) throw DimensionMismatch("exponent vector size");
  Immersion imm;
  imm.family = "light_cone_section";
  imm.ambient_dim = dim + 1 + (codim3 ? 1 : 0);
  imm.parameter_dim = dim;
  imm.light_cone = true;
  const double lift = std::tan(rho);
  imm.map = [c, a, codim3, lift, warp](const std::vector<Jet>& u) {
    Jet expo = zero_like(u);
    for (std::size_t i = 0; i < u.size(); ++i) expo += u[i] * a[i];
    const Jet f = exp(expo) * c;
    auto s = sphere_point(u);
    if (codim3) {
      s.push_back(s[0] * s[1] * warp + lift);
      Jet norm2 = zero_like(u);
      for (const auto& x : s) norm2 += x * x;
      const Jet norm = sqrt(norm2);
      for (auto& x : s) x = x / norm;
    }
    std::vector<Jet> x{f};
    for (const auto& si : s) x.push_back(f * si);
    return x;
  };
  return imm;
}

Immersion hyperbolic(std::size_t dim, double radius, std::size_t ambient_dim) {
  if (radius <= 0.0) throw InvalidInput("hyperbolic radius must be positive");
  if (dim == 0 || ambient_dim < dim + 2)
    throw DimensionMismatch("hyperbolic immersion needs codimension >= 2");
  Immersion imm;
  imm.family = "hyperbolic";
  imm.ambient_dim = ambient_dim;
  imm.parameter_dim = dim;
  imm.map = [radius, ambient_dim](const std::vector<Jet>& u) {
    std::vector<Jet> x(ambient_dim + 1, zero_like(u));
    Jet r2 = zero_like(u) + radius * radius;
    for (std::size_t i = 0; i < u.size(); ++i) {
      r2 += u[i] * u[i];
      x[1 + i] = u[i];
    }
    x[0] = sqrt(r2);
    return x;
  };
  return imm;
}

Immersion custom(std::vector<Expr> components, std::size_t parameter_dim) {
  if (components.size() < 2) throw DimensionMismatch("custom immersion needs >= 2 components");
  for (const auto& e : components) e.validate(parameter_dim);
  Immersion imm;
  imm.family = "custom";
  imm.ambient_dim = components.size() - 1;
  imm.parameter_dim = parameter_dim;
  imm.map = [components](const std::vector<Jet>& u) {
    std::vector<Jet> x;
    for (const auto& e : components) x.push_back(e.evaluate(u));
    return x;
  };
  return imm;
}

// ---------------------------------------------------------------------------
// Point jets

double eta(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("eta");
  double s = -x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

namespace {

using Vec = std::vector<double>;

Vec axpy(double a, const Vec& x, Vec y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

Vec scaled(const Vec& x, double a) { return axpy(a, x, Vec(x.size(), 0.0)); }

double euclid2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

/// First and second coordinate derivatives of the immersion.
struct RawJet {
  Vec point;
  std::vector<Vec> first;                 ///< X_i
  std::vector<std::vector<Vec>> second;   ///< f_ij
};

RawJet raw_ad(const Immersion& imm, const Vec& u) {
  const auto x = imm.jet(u);
  const std::size_t n = u.size(), m = x.size();
  RawJet r;
  r.first.assign(n, Vec(m));
  r.second.assign(n, std::vector<Vec>(n, Vec(m)));
  for (std::size_t c = 0; c < m; ++c) {
    r.point.push_back(x[c].value());
    for (std::size_t i = 0; i < n; ++i) {
      r.first[i][c] = x[c].d(i);
      for (std::size_t j = 0; j < n; ++j) r.second[i][j][c] = x[c].dd(i, j);
    }
  }
  return r;
}

RawJet raw_fd(const Immersion& imm, const Vec& u, double h) {
  const std::size_t n = u.size();
  auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
    Vec p = u;
    if (i < n) p[i] += si * h;
    if (j < n) p[j] += sj * h;
    return imm.evaluate(p);
  };
  RawJet r;
  r.point = imm.evaluate(u);
  const std::size_t m = r.point.size();
  r.first.assign(n, Vec(m));
  r.second.assign(n, std::vector<Vec>(n, Vec(m)));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec p = at(i, 1, n, 0), q = at(i, -1, n, 0);
    for (std::size_t c = 0; c < m; ++c) {
      r.first[i][c] = (p[c] - q[c]) / (2 * h);
      r.second[i][i][c] = (p[c] - 2 * r.point[c] + q[c]) / (h * h);
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Vec pp = at(i, 1, j, 1), pm = at(i, 1, j, -1), mp = at(i, -1, j, 1),
                mm = at(i, -1, j, -1);
      for (std::size_t c = 0; c < m; ++c) {
        const double v = (pp[c] - pm[c] - mp[c] + mm[c]) / (4 * h * h);
        r.second[i][j][c] = v;
        r.second[j][i][c] = v;
      }
    }
  }
  return r;
}

/// Orthonormal tangent frame t_a = sum_i X_i coeff(i, a) and the normal frame.
struct Frames {
  Eigen::MatrixXd metric;        ///< g_ij
  Eigen::MatrixXd metric_inv;
  Eigen::MatrixXd coeff;         ///< n x n
  std::vector<Vec> tangent;
  std::vector<Vec> normal;       ///< v, e..., w
};

Vec project_normal(const Vec& y, const std::vector<Vec>& tangent) {
  Vec out = y;
  for (const auto& t : tangent) out = axpy(-eta(y, t), t, out);
  return out;
}

Frames build_frames(const RawJet& r, bool light_cone) {
  const std::size_t n = r.first.size(), m = r.point.size();
  Frames f;
  f.metric.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f.metric(i, j) = eta(r.first[i], r.first[j]);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(f.metric(i, i)));
  Eigen::LLT<Eigen::MatrixXd> llt(f.metric);
  if (n == 0 || llt.info() != Eigen::Success)
    throw DegenerateMetric("induced metric is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const double min_diag = l.diagonal().minCoeff();
  if (min_diag * min_diag <= 1e-12 * std::max(scale, 1e-300))
    throw DegenerateMetric("induced metric is degenerate");
  f.metric_inv = f.metric.inverse();
  // g = L L^T, so t = X L^{-T} is orthonormal.
  f.coeff = l.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
  for (std::size_t a = 0; a < n; ++a) {
    Vec t(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) t = axpy(f.coeff(i, a), r.first[i], t);
    f.tangent.push_back(t);
  }
  if (m < n + 2) throw DegenerateMetric("normal fiber has dimension below 2");

  Vec e0(m, 0.0);
  e0[0] = 1.0;
  Vec t_unit = project_normal(e0, f.tangent);
  const double tt = eta(t_unit, t_unit);
  if (tt >= -1e-12) throw DegenerateMetric("no timelike normal direction");
  t_unit = scaled(t_unit, 1.0 / std::sqrt(-tt));

  std::vector<Vec> spacelike;
  const std::size_t q_total = m - n - 1;  // spacelike normals needed
  auto push_orthonormal = [&](Vec y) {
    y = project_normal(y, f.tangent);
    y = axpy(eta(y, t_unit), t_unit, y);
    for (const auto& s : spacelike) y = axpy(-eta(y, s), s, y);
    const double yy = eta(y, y);
    if (yy <= 1e-10 * std::max(1.0, euclid2(y))) return false;
    spacelike.push_back(scaled(y, 1.0 / std::sqrt(yy)));
    return true;
  };

  Vec v, w;
  if (light_cone) {
    const Vec& big_v = r.point;
    const double alpha = -eta(big_v, t_unit);
    if (std::fabs(alpha) <= 1e-12) throw DegenerateMetric("position vector is not null-normal");
    Vec s = axpy(-alpha, t_unit, big_v);
    const double ss = eta(s, s);
    if (ss <= 0.0) throw DegenerateMetric("position vector is not null");
    s = scaled(s, 1.0 / std::sqrt(ss));
    spacelike.push_back(s);
    v = big_v;
    // <v, w> = 1 with w null in span(T, S).
    // V = alpha T + |alpha| S.
    const Vec t_part = scaled(t_unit, alpha > 0 ? -1.0 : 1.0);
    w = scaled(axpy(1.0, s, t_part), 1.0 / (2 * std::fabs(alpha)));
  }
  for (std::size_t c = 1; c < m && spacelike.size() < q_total; ++c) {
    Vec y(m, 0.0);
    y[c] = 1.0;
    push_orthonormal(y);
  }
  if (spacelike.size() != q_total) throw DegenerateMetric("could not complete the normal frame");
  if (!light_cone) {
    const double inv = 1.0 / std::sqrt(2.0);
    v = scaled(axpy(1.0, spacelike[0], t_unit), inv);
    w = scaled(axpy(1.0, spacelike[0], scaled(t_unit, -1.0)), inv);
  }
  f.normal.push_back(v);
  for (std::size_t i = 1; i < spacelike.size(); ++i) f.normal.push_back(spacelike[i]);
  f.normal.push_back(w);
  return f;
}

Matrix<double> columns(const std::vector<Vec>& cols, std::size_t rows) {
  return hstack<double>(cols, rows);
}

/// Pi_ij = pr_N f_ij in coordinates.
std::vector<std::vector<Vec>> coordinate_pi(const RawJet& r, const Frames& f) {
  const std::size_t n = r.first.size();
  std::vector<std::vector<Vec>> pi(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pi[i][j] = project_normal(r.second[i][j], f.tangent);
  return pi;
}

PointJet assemble(const Vec& u, const RawJet& r, const Frames& f) {
  const std::size_t n = u.size(), m = r.point.size();
  const auto cpi = coordinate_pi(r, f);
  PointJet pj;
  pj.u = u;
  pj.point = r.point;
  pj.induced_metric = Matrix<double>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pj.induced_metric(i, j) = f.metric(i, j);
  pj.tangent_frame = columns(f.tangent, m);
  pj.normal_frame = columns(f.normal, m);
  pj.space = SignatureSpace(1, f.normal.size() - 2);
  pj.pi.assign(n * n, Vec(m, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Vec s(m, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          s = axpy(f.coeff(i, a) * f.coeff(j, b), cpi[i][j], s);
      pj.pi[a * n + b] = s;
    }
  pj.mean_curvature.assign(m, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    pj.mean_curvature = axpy(1.0 / static_cast<double>(n), pj.pi[a * n + a], pj.mean_curvature);
  pj.shapes.tangent_dim = n;
  pj.shapes.space = pj.space;
  for (const auto& xi : f.normal) pj.shapes.operators.push_back(pj.shape_operator(xi));
  return pj;
}

}  // namespace

Matrix<double> PointJet::shape_operator(const std::vector<double>& xi) const {
  const std::size_t n = dim();
  Matrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = eta(pi[i * n + j], xi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }
  return a;
}

PointJet point_jet(const Immersion& imm, const std::vector<double>& u, JetMethod method,
                   std::optional<double> h) {
  const RawJet r = method == JetMethod::Automatic ? raw_ad(imm, u)
                                                  : raw_fd(imm, u, h.value_or(imm.h));
  const Frames f = build_frames(r, imm.light_cone);
  return assemble(u, r, f);
}

// ---------------------------------------------------------------------------
// Transport

namespace {

using Mat = Eigen::MatrixXd;

Mat eta_matrix(std::size_t m) {
  Mat e = Mat::Identity(m, m);
  e(0, 0) = -1.0;
  return e;
}

/// xi' = M xi along gamma with velocity `vel`.
Mat transport_generator(const Immersion& imm, const Vec& u, const Vec& vel) {
  const RawJet r = raw_ad(imm, u);
  const std::size_t n = u.size(), m = r.point.size();
  Mat x(m, n), g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) x(c, i) = r.first[i][c];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = eta(r.first[i], r.first[j]);
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw DegenerateMetric("metric degenerates along the path");
  // d_j = sum_k f_jk vel_k
  Mat d(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < m; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += r.second[j][k][c] * vel[k];
      d(c, j) = s;
    }
  return -x * llt.solve((eta_matrix(m) * d).transpose());
}

Vec lerp(const Vec& a, const Vec& b, double t) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Matrix<double> from_eigen(const Mat& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

Mat to_eigen(const Matrix<double>& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

TransportResult transport_path(const Immersion& imm, const std::vector<std::vector<double>>& path,
                               std::size_t steps) {
  if (path.size() < 2) throw InvalidInput("path needs at least two points");
  for (const auto& p : path)
    if (p.size() != imm.parameter_dim) throw DimensionMismatch("path point size");
  if (steps == 0) throw InvalidInput("steps must be positive");
  const std::size_t m = imm.ambient_dim + 1;
  std::vector<double> lengths;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    lengths.push_back(distance(path[s], path[s + 1]));
    total += lengths.back();
  }
  Mat phi = Mat::Identity(m, m);
  std::size_t used = 0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    if (lengths[s] == 0.0) continue;
    const std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(steps) * lengths[s] / total)));
    used += k;
    Vec vel(path[s].size());
    for (std::size_t i = 0; i < vel.size(); ++i) vel[i] = path[s + 1][i] - path[s][i];
    const double dt = 1.0 / static_cast<double>(k);
    for (std::size_t step = 0; step < k; ++step) {
      const double t = static_cast<double>(step) * dt;
      const Mat m1 = transport_generator(imm, lerp(path[s], path[s + 1], t), vel);
      const Mat m2 = transport_generator(imm, lerp(path[s], path[s + 1], t + dt / 2), vel);
      const Mat m4 = transport_generator(imm, lerp(path[s], path[s + 1], t + dt), vel);
      const Mat k1 = m1 * phi;
      const Mat k2 = m2 * (phi + dt / 2 * k1);
      const Mat k3 = m2 * (phi + dt / 2 * k2);
      const Mat k4 = m4 * (phi + dt * k3);
      phi += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
  const PointJet start = point_jet(imm, path.front(), JetMethod::Automatic);
  const PointJet end = point_jet(imm, path.back(), JetMethod::Automatic);
  const Mat fp = to_eigen(start.normal_frame), fq = to_eigen(end.normal_frame);
  const Mat e = eta_matrix(m);
  const Mat gram = to_eigen(start.space.gram<double>());
  const Mat tau = gram * fq.transpose() * e * phi * fp;  // G^{-1} = G
  TransportResult out;
  out.path = path;
  out.tau = from_eigen(tau);
  out.ambient = from_eigen(phi);
  out.steps = used;
  out.residual = (tau.transpose() * gram * tau - gram).cwiseAbs().maxCoeff();
  return out;
}

TransportResult parallel_transport(const Immersion& imm,
                                   const std::vector<std::vector<double>>& loop,
                                   std::size_t steps) {
  if (loop.size() < 2) throw InvalidInput("loop needs at least two points");
  if (steps < 8) throw InvalidInput("loops need at least 8 steps");
  // Loops in periodic coordinates may end at a different parameter with the
  // same image; close only when the images differ.
  auto closed = loop;
  const Vec a = imm.evaluate(closed.front()), b = imm.evaluate(closed.back());
  if (distance(a, b) > 1e-12 * std::max(1.0, std::sqrt(euclid2(a))))
    closed.push_back(closed.front());
  return transport_path(imm, closed, steps);
}

// ---------------------------------------------------------------------------
// Checks

LightConeReport light_cone_check(const Immersion& imm,
                                 const std::vector<std::vector<double>>& samples,
                                 const std::vector<std::vector<std::vector<double>>>& loops,
                                 std::size_t steps, bool strict, JetMethod method) {
  LightConeReport rep;
  rep.all_on_cone = true;
  for (const auto& u : samples) {
    const Vec v = imm.evaluate(u);
    LightConeSample s;
    s.u = u;
    s.vv = eta(v, v);
    s.on_cone = std::fabs(s.vv) <= 1e-9 * std::max(1.0, euclid2(v));
    rep.all_on_cone = rep.all_on_cone && s.on_cone;
    if (!s.on_cone && strict)
      throw NotOnCone("<V,V> = " + std::to_string(s.vv) + " at a sample point");
    const RawJet r = method == JetMethod::Automatic ? raw_ad(imm, u) : raw_fd(imm, u, imm.h);
    double tangential = 0.0;
    for (const auto& x : r.first) tangential = std::max(tangential, std::fabs(eta(x, v)));
    s.v_normal = tangential <= 1e-6 * std::max(1.0, euclid2(v));
    if (s.on_cone && s.v_normal) {
      Immersion cone = imm;
      cone.light_cone = true;
      const PointJet pj = point_jet(cone, u, method);
      Matrix<double> a = pj.shape_operator(v);
      for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
      s.shape_residual = a.max_abs();
    } else {
      s.shape_residual = std::numeric_limits<double>::infinity();
    }
    rep.samples.push_back(s);
  }
  for (const auto& loop : loops) {
    const auto t = parallel_transport(imm, loop, steps);
    const Vec v = imm.evaluate(loop.front());
    const Mat phi = to_eigen(t.ambient);
    Eigen::VectorXd ve = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    rep.loop_residuals.push_back((phi * ve - ve).cwiseAbs().maxCoeff());
  }
  return rep;
}

namespace {

std::vector<double> sorted_spectrum(const Matrix<double>& a) {
  const Mat e = to_eigen(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(e, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + e.rows());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> distinct_values(const std::vector<double>& sorted, double tol) {
  std::vector<double> out;
  for (double x : sorted)
    if (out.empty() || std::fabs(x - out.back()) > tol) out.push_back(x);
  return out;
}

}  // namespace

ParallelPiReport parallel_pi_check(const Immersion& imm,
                                   const std::vector<std::vector<double>>& samples, double tol,
                                   double spectrum_tol) {
  constexpr double kStep = 1e-4;
  ParallelPiReport rep;
  rep.parallel = true;
  for (const auto& u : samples) {
    const std::size_t n = u.size();
    const RawJet r = raw_ad(imm, u);
    const Frames f = build_frames(r, imm.light_cone);
    const auto pi = coordinate_pi(r, f);
    const std::size_t m = r.point.size();
    // Christoffel symbols gamma[k][i][l] of nabla_{d_k} d_i = gamma^l_{ki} d_l.
    std::vector<std::vector<Vec>> gamma(n, std::vector<Vec>(n, Vec(n, 0.0)));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs(j) = eta(r.second[k][i], r.first[j]);
        const Eigen::VectorXd c = f.metric_inv * rhs;
        for (std::size_t l = 0; l < n; ++l) gamma[k][i][l] = c(l);
      }
    // d_k Pi_ij by central differences of the exact second jets.
    std::vector<std::vector<std::vector<Vec>>> dpi(n);
    for (std::size_t k = 0; k < n; ++k) {
      Vec up = u, dn = u;
      up[k] += kStep;
      dn[k] -= kStep;
      const RawJet ru = raw_ad(imm, up), rd = raw_ad(imm, dn);
      const Frames fu = build_frames(ru, imm.light_cone), fd = build_frames(rd, imm.light_cone);
      const auto pu = coordinate_pi(ru, fu), pd = coordinate_pi(rd, fd);
      dpi[k].assign(n, std::vector<Vec>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          dpi[k][i][j] = scaled(axpy(-1.0, pd[i][j], pu[i][j]), 1.0 / (2 * kStep));
    }
    // (nabla_k Pi)_ij in coordinates, then in the orthonormal frame.
    std::vector<std::vector<std::vector<Vec>>> cov(n, std::vector<std::vector<Vec>>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        cov[k][i].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
          Vec s = project_normal(dpi[k][i][j], f.tangent);
          for (std::size_t l = 0; l < n; ++l) {
            s = axpy(-gamma[k][i][l], pi[l][j], s);
            s = axpy(-gamma[k][j][l], pi[i][l], s);
          }
          cov[k][i][j] = s;
        }
      }
    double residual = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          Vec s(m, 0.0);
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                s = axpy(f.coeff(k, a) * f.coeff(i, b) * f.coeff(j, c), cov[k][i][j], s);
          for (double x : s) residual = std::max(residual, std::fabs(x));
        }
    const PointJet pj = assemble(u, r, f);
    ParallelPiSample sample;
    sample.u = u;
    sample.residual = residual;
    sample.eigenvalues = sorted_spectrum(pj.shape_operator(pj.mean_curvature));
    sample.distinct = distinct_values(sample.eigenvalues, 1e-6);
    rep.parallel = rep.parallel && residual <= tol;
    rep.samples.push_back(std::move(sample));
  }
  if (!rep.samples.empty()) {
    rep.eigenvalues = rep.samples.front().distinct;
    const auto& ref = rep.samples.front().eigenvalues;
    for (const auto& s : rep.samples)
      for (std::size_t i = 0; i < ref.size(); ++i)
        rep.spectrum_spread = std::max(rep.spectrum_spread, std::fabs(s.eigenvalues[i] - ref[i]));
  }
  rep.constant_spectrum = rep.spectrum_spread <= spectrum_tol;
  return rep;
}

std::string to_string(MeanCurvatureClass c) {
  switch (c) {
    case MeanCurvatureClass::Zero: return "zero";
    case MeanCurvatureClass::Timelike: return "timelike";
    case MeanCurvatureClass::Null: return "null";
    case MeanCurvatureClass::Spacelike: return "spacelike";
  }
  return "unknown";
}

MeanCurvatureCase mean_curvature_case(const PointJet& jet,
                                      const std::optional<std::vector<double>>& injected,
                                      double tol) {
  const Vec h = injected.value_or(jet.mean_curvature);
  if (h.size() != jet.point.size()) throw DimensionMismatch("mean curvature vector size");
  MeanCurvatureCase out;
  const double norm2 = euclid2(h);
  out.hh = eta(h, h);
  out.a_h_norm = jet.shape_operator(h).max_abs();
  if (std::sqrt(norm2) <= tol) {
    out.h_class = MeanCurvatureClass::Zero;
    return out;
  }
  if (std::fabs(out.hh) <= tol * std::max(1.0, norm2)) {
    out.h_class = MeanCurvatureClass::Null;
    out.contradiction = true;
    out.reason = out.a_h_norm <= tol
                     ? "null mean curvature forces A_H = 0, contradicting fullness"
                     : "null mean curvature requires A_H = <H,H> id = 0, but A_H != 0";
    return out;
  }
  out.h_class = out.hh < 0 ? MeanCurvatureClass::Timelike : MeanCurvatureClass::Spacelike;
  return out;
}

}  // namespace normhol::geometry
