#include "normhol/curvature.hpp"

#include <string>

namespace normhol {

namespace {

// The canonical gram is an involution (it swaps v_i and w_i), so it is its own inverse.
template <Scalar T>
Matrix<T> gram_inverse(const SignatureSpace& space) {
  return space.gram<T>();
}

template <Scalar T>
T half() {
  return ScalarTraits<T>::from_ratio(1, 2);
}

}  // namespace

template <Scalar T>
void ShapeFamily<T>::validate(Tolerance tol) const {
  if (operators.size() != space.dim())
    throw DimensionMismatch("shape family needs " + std::to_string(space.dim()) +
                            " operators, got " + std::to_string(operators.size()));
  for (std::size_t i = 0; i < operators.size(); ++i) {
    const auto& a = operators[i];
    if (a.rows() != tangent_dim || a.cols() != tangent_dim)
      throw DimensionMismatch("shape operator " + space.label(i) + " has wrong size");
    if (!(a - a.transpose()).is_zero(tol, a.max_abs()))
      throw InvalidInput("shape operator " + space.label(i) + " is not symmetric");
  }
}

template <Scalar T>
Matrix<T> ShapeFamily<T>::shape_operator(const Vector<T>& xi) const {
  if (xi.size() != space.dim()) throw DimensionMismatch("shape_operator");
  Matrix<T> a(tangent_dim, tangent_dim);
  for (std::size_t i = 0; i < xi.size(); ++i) a += operators[i] * xi[i];
  return a;
}

// ---------------------------------------------------------------------------

template <Scalar T>
OlmosTensor<T>::OlmosTensor(SignatureSpace space)
    : space_(space), values_(space.dim() * space.dim() * space.dim() * space.dim(),
                             ScalarTraits<T>::zero()) {}

template <Scalar T>
T OlmosTensor<T>::evaluate(const Vector<T>& x, const Vector<T>& y, const Vector<T>& z,
                           const Vector<T>& u) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n || z.size() != n || u.size() != n)
    throw DimensionMismatch("OlmosTensor::evaluate");
  T s = ScalarTraits<T>::zero();
  for (std::size_t a = 0; a < n; ++a) {
    if (ScalarTraits<T>::is_zero(x[a], 0.0, Tolerance{0.0})) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (ScalarTraits<T>::is_zero(y[b], 0.0, Tolerance{0.0})) continue;
      const T xy = x[a] * y[b];
      for (std::size_t c = 0; c < n; ++c) {
        if (ScalarTraits<T>::is_zero(z[c], 0.0, Tolerance{0.0})) continue;
        const T xyz = xy * z[c];
        for (std::size_t d = 0; d < n; ++d) s += xyz * u[d] * at(a, b, c, d);
      }
    }
  }
  return s;
}

template <Scalar T>
Matrix<T> OlmosTensor<T>::operator_at(std::size_t a, std::size_t b) const {
  const std::size_t n = dim();
  Matrix<T> cov(n, n);  // cov(d, c) = <R(a,b) c, d>
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d) cov(d, c) = at(a, b, c, d);
  return gram_inverse<T>(space_) * cov;
}

template <Scalar T>
Matrix<T> OlmosTensor<T>::operator_for(const Vector<T>& x, const Vector<T>& y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw DimensionMismatch("OlmosTensor::operator_for");
  Matrix<T> cov(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const T w = x[a] * y[b];
      if (ScalarTraits<T>::is_zero(w, 0.0, Tolerance{0.0})) continue;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) cov(d, c) += w * at(a, b, c, d);
    }
  return gram_inverse<T>(space_) * cov;
}

template <Scalar T>
std::vector<Matrix<T>> OlmosTensor<T>::curvature_operators() const {
  std::vector<Matrix<T>> ops;
  for (std::size_t a = 0; a < dim(); ++a)
    for (std::size_t b = a + 1; b < dim(); ++b) ops.push_back(operator_at(a, b));
  return ops;
}

template <Scalar T>
bool OlmosTensor<T>::is_zero(Tolerance tol) const {
  double scale = 0.0;
  for (const auto& x : values_) scale = std::max(scale, ScalarTraits<T>::magnitude(x));
  for (const auto& x : values_)
    if (!ScalarTraits<T>::is_zero(x, 1.0, tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------

template <Scalar T>
Matrix<T> normal_curvature(const ShapeFamily<T>& shapes, const Vector<T>& x,
                           const Vector<T>& y) {
  if (x.size() != shapes.tangent_dim || y.size() != shapes.tangent_dim)
    throw DimensionMismatch("normal_curvature expects tangent vectors of dimension " +
                            std::to_string(shapes.tangent_dim));
  const std::size_t n = shapes.space.dim();
  if (shapes.operators.size() != n) throw DimensionMismatch("shape family size");
  Matrix<T> pairing(n, n);  // pairing(a, b) = <R(X,Y) xi_a, xi_b>
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Matrix<T> br = commutator(shapes.operators[a], shapes.operators[b]);
      const Vector<T> bx = br * x;
      const T v = dot<T>(bx, y);
      pairing(a, b) = v;
      pairing(b, a) = -v;
    }
  // <M xi_a, xi_b> = (G M)(b, a)  =>  M = G^{-1} pairing^T
  return gram_inverse<T>(shapes.space) * pairing.transpose();
}

template <Scalar T>
OlmosTensor<T> olmos_tensor(const ShapeFamily<T>& shapes) {
  shapes.validate(Tolerance{0.0 + 1e-12});
  const std::size_t n = shapes.space.dim();
  const std::size_t m = shapes.tangent_dim;
  const Matrix<T> g = shapes.space.template gram<T>();
  OlmosTensor<T> r(shapes.space);
  // R(xi_a, xi_b) = sum_i R_perp(A_b e_i, A_a e_i). The argument order fixes the
  // overall sign so that <R(a,b)c,d> = -1/2 Tr([A_a,A_b][A_c,A_d]).
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      Matrix<T> op(n, n);
      for (std::size_t i = 0; i < m; ++i) {
        const Vector<T> x = shapes.operators[b].col(i);
        const Vector<T> y = shapes.operators[a].col(i);
        op += normal_curvature(shapes, x, y);
      }
      const Matrix<T> cov = g * op;  // cov(d, c) = <op c, d>
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          r.at(a, b, c, d) = cov(d, c);
          r.at(b, a, c, d) = -cov(d, c);
        }
    }
  return r;
}

template <Scalar T>
CurvatureIdentityReport check_curvature_identities(const OlmosTensor<T>& r, Tolerance tol) {
  const std::size_t n = r.dim();
  double scale = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
          scale = std::max(scale, ScalarTraits<T>::magnitude(r.at(a, b, c, d)));
  auto zero = [&](const T& x) { return ScalarTraits<T>::is_zero(x, scale, tol); };
  CurvatureIdentityReport rep{true, true, true, true};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const T& v = r.at(a, b, c, d);
          if (!zero(v + r.at(b, a, c, d))) rep.antisymmetric = false;
          if (!zero(v + r.at(a, b, d, c))) rep.skew_adjoint = false;
          if (!zero(v - r.at(c, d, a, b))) rep.pair_symmetric = false;
          if (!zero(v + r.at(b, c, a, d) + r.at(c, a, b, d))) rep.first_bianchi = false;
        }
  return rep;
}

template <Scalar T>
bool satisfies_trace_formula(const OlmosTensor<T>& r, const ShapeFamily<T>& shapes,
                             Tolerance tol) {
  const std::size_t n = r.dim();
  if (shapes.space != r.space()) throw DimensionMismatch("trace formula: spaces differ");
  std::vector<Matrix<T>> br(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      br[a * n + b] = commutator(shapes.operators[a], shapes.operators[b]);
  double scale = 0.0;
  for (const auto& m : br) scale = std::max(scale, m.max_abs() * m.max_abs());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const T rhs = -half<T>() * trace(br[a * n + b] * br[c * n + d]);
          if (!ScalarTraits<T>::is_zero(r.at(a, b, c, d) - rhs, scale, tol)) return false;
        }
  return true;
}

template <Scalar T>
OlmosTensor<T> conjugate_tensor(const OlmosTensor<T>& r, const Matrix<T>& tau, Tolerance tol) {
  const std::size_t n = r.dim();
  if (tau.rows() != n || tau.cols() != n) throw DimensionMismatch("conjugate_tensor");
  const Matrix<T> g = r.space().template gram<T>();
  if (!(tau.transpose() * g * tau - g).is_zero(tol, 1.0))
    throw NonOrthogonalTransport("tau^T G tau differs from G");
  // Pull back one slot at a time: out(a,b,c,d) = sum tau_ia tau_jb tau_kc tau_ld r(i,j,k,l).
  std::vector<T> cur(n * n * n * n), next(n * n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) cur[((a * n + b) * n + c) * n + d] = r.at(a, b, c, d);
  std::size_t stride = n * n * n;
  for (int slot = 0; slot < 4; ++slot) {
    for (std::size_t idx = 0; idx < cur.size(); ++idx) {
      const std::size_t out_k = (idx / stride) % n;
      const std::size_t base = idx - out_k * stride;
      T s = ScalarTraits<T>::zero();
      for (std::size_t i = 0; i < n; ++i) {
        const T& t = tau(i, out_k);
        if (ScalarTraits<T>::is_zero(t, 0.0, Tolerance{0.0})) continue;
        s += t * cur[base + i * stride];
      }
      next[idx] = s;
    }
    std::swap(cur, next);
    stride /= n;
  }
  OlmosTensor<T> out(r.space());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) out.at(a, b, c, d) = cur[((a * n + b) * n + c) * n + d];
  out.set_transport(r.transport() ? Matrix<T>(*r.transport() * tau) : tau);
  return out;
}

// ---------------------------------------------------------------------------

template <Scalar T>
std::vector<Matrix<T>> ScreenComponents<T>::p_values() const {
  std::vector<Matrix<T>> out;
  for (std::size_t a = 0; a < p0.size(); ++a)
    for (std::size_t b = a + 1; b < p0.size(); ++b) out.push_back(p0[a][b]);
  for (const auto& pi : p)
    for (const auto& m : pi) out.push_back(m);
  return out;
}

template <Scalar T>
std::vector<Matrix<T>> ScreenComponents<T>::q_values() const {
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) out.push_back(q[i][j]);
  return out;
}

template <Scalar T>
std::vector<Matrix<T>> ScreenComponents<T>::values() const {
  auto out = p_values();
  for (auto& m : q_values()) out.push_back(std::move(m));
  return out;
}

template <Scalar T>
ScreenComponents<T> extract_screen_components(const OlmosTensor<T>& r) {
  const SignatureSpace& s = r.space();
  const std::size_t p = s.p(), q = s.q();
  ScreenComponents<T> out;
  out.space = s;
  auto block = [&](std::size_t x, std::size_t y) {
    Matrix<T> m(q, q);
    for (std::size_t k = 0; k < q; ++k)
      for (std::size_t c = 0; c < q; ++c) m(k, c) = r.at(x, y, s.e_index(c), s.e_index(k));
    return m;
  };
  out.p0.assign(q, std::vector<Matrix<T>>(q));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) out.p0[a][b] = block(s.e_index(a), s.e_index(b));
  out.p.assign(p, std::vector<Matrix<T>>(q));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t a = 0; a < q; ++a) out.p[i][a] = block(s.w_index(i), s.e_index(a));
  out.q.assign(p, std::vector<Matrix<T>>(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) out.q[i][j] = block(s.w_index(i), s.w_index(j));
  return out;
}

template <Scalar T>
Matrix<T> screen_expansion(const ScreenComponents<T>& comp, const Vector<T>& xi1,
                           const Vector<T>& xi2) {
  const SignatureSpace& s = comp.space;
  const std::size_t p = s.p(), q = s.q();
  if (xi1.size() != s.dim() || xi2.size() != s.dim()) throw DimensionMismatch("screen_expansion");
  Matrix<T> out(q, q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b)
      out += comp.p0[a][b] * (xi1[s.e_index(a)] * xi2[s.e_index(b)]);
  for (std::size_t j = 0; j < p; ++j) {
    const T b1 = xi1[s.w_index(j)], b2 = xi2[s.w_index(j)];
    for (std::size_t a = 0; a < q; ++a) {
      const T z = b1 * xi2[s.e_index(a)] - b2 * xi1[s.e_index(a)];
      out += comp.p[j][a] * z;
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      out += comp.q[i][j] * (xi1[s.w_index(i)] * xi2[s.w_index(j)]);
  return out;
}

template <Scalar T>
Matrix<T> screen_block(const OlmosTensor<T>& r, const Vector<T>& xi1, const Vector<T>& xi2) {
  const SignatureSpace& s = r.space();
  const std::size_t q = s.q();
  Matrix<T> out(q, q);
  for (std::size_t k = 0; k < q; ++k)
    for (std::size_t c = 0; c < q; ++c)
      out(k, c) = r.evaluate(xi1, xi2, s.template basis_vector<T>(s.e_index(c)),
                             s.template basis_vector<T>(s.e_index(k)));
  return out;
}

template <Scalar T>
bool q_generated_by_p(const ScreenComponents<T>& comp, Tolerance tol) {
  const auto pb = span_basis(comp.p_values(), comp.space.q(), tol);
  for (const auto& m : comp.q_values())
    if (!in_span(m, pb, tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------

template <Scalar T>
std::vector<Matrix<T>> span_basis(const std::vector<Matrix<T>>& mats, std::size_t n,
                                  Tolerance tol) {
  if (mats.empty()) return {};
  Matrix<T> rows(mats.size(), n * n);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != n || mats[i].cols() != n) throw DimensionMismatch("span_basis");
    for (std::size_t j = 0; j < n * n; ++j) rows(i, j) = mats[i].flat()[j];
  }
  const Matrix<T> rs = row_space(rows, tol);
  std::vector<Matrix<T>> out;
  for (std::size_t i = 0; i < rs.rows(); ++i) {
    const auto r = rs.row(i);
    out.push_back(unvectorize<T>(r, n, n));
  }
  return out;
}

template <Scalar T>
bool in_span(const Matrix<T>& m, const std::vector<Matrix<T>>& basis, Tolerance tol) {
  const std::size_t n2 = m.rows() * m.cols();
  if (basis.empty()) return m.is_zero(tol, 1.0);
  Matrix<T> a(n2, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t j = 0; j < n2; ++j) a(j, k) = basis[k].flat()[j];
  return solve(a, vectorize(m), tol).has_value();
}

namespace {

std::size_t pair_index(std::size_t a, std::size_t b, std::size_t q) {
  // a < b, lexicographic
  return a * q - a * (a + 1) / 2 + (b - a - 1);
}

}  // namespace

template <Scalar T>
std::vector<std::vector<Matrix<T>>> TensorSpaceBasis<T>::curvature_element(std::size_t i) const {
  const std::size_t q = space_dim, d = algebra_basis.size();
  std::vector<std::vector<Matrix<T>>> out(q, std::vector<Matrix<T>>(q, Matrix<T>(q, q)));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b)
      for (std::size_t k = 0; k < d; ++k) {
        const T& c = coordinates(pair_index(a, b, q) * d + k, i);
        out[a][b] += algebra_basis[k] * c;
        out[b][a] -= algebra_basis[k] * c;
      }
  return out;
}

template <Scalar T>
std::vector<Matrix<T>> TensorSpaceBasis<T>::weak_element(std::size_t i) const {
  const std::size_t q = space_dim, d = algebra_basis.size();
  std::vector<Matrix<T>> out(q, Matrix<T>(q, q));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t k = 0; k < d; ++k) out[a] += algebra_basis[k] * coordinates(a * d + k, i);
  return out;
}

template <Scalar T>
TensorSpaceBasis<T> curvature_space(const std::vector<Matrix<T>>& h, std::size_t q,
                                    Tolerance tol) {
  TensorSpaceBasis<T> out;
  out.kind = TensorSpaceKind::Curvature;
  out.space_dim = q;
  out.algebra_basis = span_basis(h, q, tol);
  const std::size_t d = out.algebra_basis.size();
  const std::size_t npairs = q * (q - (q > 0 ? 1 : 0)) / 2;
  const std::size_t unknowns = npairs * d;
  if (unknowns == 0) {
    out.coordinates = Matrix<T>(0, 0);
    return out;
  }
  // Rows: every ordered triple (x,y,z) and output coordinate r of
  // R(x,y)z + R(y,z)x + R(z,x)y.
  Matrix<T> c(q * q * q * q, unknowns);
  std::size_t row = 0;
  auto add_term = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t rr) {
    if (x == y) return;
    const bool flip = x > y;
    const std::size_t pi = flip ? pair_index(y, x, q) : pair_index(x, y, q);
    for (std::size_t k = 0; k < d; ++k) {
      const T& v = out.algebra_basis[k](rr, z);
      if (flip)
        c(row, pi * d + k) -= v;
      else
        c(row, pi * d + k) += v;
    }
  };
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y)
      for (std::size_t z = 0; z < q; ++z)
        for (std::size_t rr = 0; rr < q; ++rr, ++row) {
          add_term(x, y, z, rr);
          add_term(y, z, x, rr);
          add_term(z, x, y, rr);
        }
  out.coordinates = nullspace(c, tol);
  return out;
}

template <Scalar T>
TensorSpaceBasis<T> weak_curvature_space(const std::vector<Matrix<T>>& h, std::size_t q,
                                         const Matrix<T>& metric, Tolerance tol) {
  TensorSpaceBasis<T> out;
  out.kind = TensorSpaceKind::WeakCurvature;
  out.space_dim = q;
  out.algebra_basis = span_basis(h, q, tol);
  const Matrix<T> s = metric.empty() ? Matrix<T>::identity(q) : metric;
  if (s.rows() != q || s.cols() != q) throw DimensionMismatch("weak_curvature_space metric");
  const std::size_t d = out.algebra_basis.size();
  const std::size_t unknowns = q * d;
  if (unknowns == 0) {
    out.coordinates = Matrix<T>(0, 0);
    return out;
  }
  std::vector<Matrix<T>> sh;
  for (const auto& hk : out.algebra_basis) sh.push_back(s * hk);
  // Row (x,y,z): h(Q(x)y,z) + h(Q(y)z,x) + h(Q(z)x,y), with h(H e_y, e_z) = (S H)(z, y).
  Matrix<T> c(q * q * q, unknowns);
  std::size_t row = 0;
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y)
      for (std::size_t z = 0; z < q; ++z, ++row)
        for (std::size_t k = 0; k < d; ++k) {
          c(row, x * d + k) += sh[k](z, y);
          c(row, y * d + k) += sh[k](x, z);
          c(row, z * d + k) += sh[k](y, x);
        }
  out.coordinates = nullspace(c, tol);
  return out;
}

template <Scalar T>
WeakBergerResult is_weak_berger(const std::vector<Matrix<T>>& h, std::size_t q,
                                const Matrix<T>& metric, Tolerance tol) {
  const auto basis = span_basis(h, q, tol);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!in_span(commutator(basis[i], basis[j]), basis, tol))
        throw NotLieClosed("[h,h] is not contained in h");
  const auto b = weak_curvature_space(h, q, metric, tol);
  std::vector<Matrix<T>> values;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (auto& m : b.weak_element(i)) values.push_back(std::move(m));
  WeakBergerResult res;
  res.algebra_dim = basis.size();
  res.achieved_dim = span_basis(values, q, tol).size();
  res.weak_berger = res.achieved_dim == res.algebra_dim;
  return res;
}

#define NORMHOL_INSTANTIATE(T)                                                                  \
  template struct ShapeFamily<T>;                                                              \
  template class OlmosTensor<T>;                                                               \
  template struct ScreenComponents<T>;                                                         \
  template struct TensorSpaceBasis<T>;                                                         \
  template Matrix<T> normal_curvature(const ShapeFamily<T>&, const Vector<T>&,                 \
                                      const Vector<T>&);                                       \
  template OlmosTensor<T> olmos_tensor(const ShapeFamily<T>&);                                 \
  template CurvatureIdentityReport check_curvature_identities(const OlmosTensor<T>&, Tolerance); \
  template bool satisfies_trace_formula(const OlmosTensor<T>&, const ShapeFamily<T>&, Tolerance); \
  template OlmosTensor<T> conjugate_tensor(const OlmosTensor<T>&, const Matrix<T>&, Tolerance); \
  template ScreenComponents<T> extract_screen_components(const OlmosTensor<T>&);               \
  template Matrix<T> screen_expansion(const ScreenComponents<T>&, const Vector<T>&,            \
                                      const Vector<T>&);                                       \
  template Matrix<T> screen_block(const OlmosTensor<T>&, const Vector<T>&, const Vector<T>&);  \
  template bool q_generated_by_p(const ScreenComponents<T>&, Tolerance);                       \
  template std::vector<Matrix<T>> span_basis(const std::vector<Matrix<T>>&, std::size_t,       \
                                             Tolerance);                                       \
  template bool in_span(const Matrix<T>&, const std::vector<Matrix<T>>&, Tolerance);           \
  template TensorSpaceBasis<T> curvature_space(const std::vector<Matrix<T>>&, std::size_t,     \
                                               Tolerance);                                     \
  template TensorSpaceBasis<T> weak_curvature_space(const std::vector<Matrix<T>>&,             \
                                                    std::size_t, const Matrix<T>&, Tolerance); \
  template WeakBergerResult is_weak_berger(const std::vector<Matrix<T>>&, std::size_t,         \
                                           const Matrix<T>&, Tolerance);

NORMHOL_INSTANTIATE(Rational)
NORMHOL_INSTANTIATE(double)

#undef NORMHOL_INSTANTIATE

}  // namespace normhol
