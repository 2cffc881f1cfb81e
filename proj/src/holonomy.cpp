#include "normhol/holonomy.hpp"

#include <Eigen/Eigenvalues>
#include <complex>
#include <random>

#include "polynomial.hpp"

namespace normhol {

std::string to_string(Reducibility r) {
  switch (r) {
    case Reducibility::Irreducible:
      return "irreducible";
    case Reducibility::WeaklyIrreducible:
      return "weakly_irreducible";
    case Reducibility::Decomposable:
      return "decomposable";
  }
  return "unknown";
}

namespace {

template <Scalar T>
Matrix<T> vstack(const std::vector<Matrix<T>>& ops, std::size_t n) {
  Matrix<T> m(ops.size() * n, n);
  for (std::size_t k = 0; k < ops.size(); ++k) m.set_block(k * n, 0, ops[k]);
  return m;
}

template <Scalar T>
Subspace<T> common_kernel(const std::vector<Matrix<T>>& ops, std::size_t n, Tolerance tol) {
  if (ops.empty()) return Subspace<T>::full(n);
  return Subspace<T>(nullspace(vstack(ops, n), tol), n, tol);
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

std::size_t witt_index(const Matrix<double>& gram) {
  if (gram.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(gram));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::size_t pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 1e-9 * scale) ++pos;
    if (es.eigenvalues()[i] < -1e-9 * scale) ++neg;
  }
  return std::min(pos, neg);
}

template <Scalar T>
std::vector<Matrix<T>> restrict_all(const std::vector<Matrix<T>>& ops, const Subspace<T>& u,
                                    Tolerance tol) {
  std::vector<Matrix<T>> out;
  for (const auto& op : ops) out.push_back(restrict_operator(op, u, tol));
  return out;
}

// Exact splitting from one self-adjoint commutant element.
bool try_split(const Matrix<Rational>& c, CommutantSplit<Rational>& res, Tolerance tol) {
  const std::size_t n = c.rows();
  const auto m = poly::minimal_polynomial(c);
  if (poly::degree(m) <= 1 || poly::real_factor_count(m) < 2) return false;
  res.decomposable = true;
  if (!res.element) res.element = c;
  for (const auto& rho : poly::rational_roots(poly::radical(m))) {
    const poly::Poly lin{Rational(-rho), Rational(1)};
    poly::Poly f{Rational(1)}, g = m;
    for (;;) {
      auto [q, r] = poly::divmod(g, lin);
      if (!r.empty()) break;
      g = q;
      f = poly::multiply(f, lin);
    }
    if (poly::degree(g) < 1) continue;
    Subspace<Rational> u1(nullspace(poly::apply(f, c), tol), n, tol);
    Subspace<Rational> u2(nullspace(poly::apply(g, c), tol), n, tol);
    if (u1.dim() + u2.dim() != n || u1.dim() == 0 || u2.dim() == 0) continue;
    res.first = std::move(u1);
    res.second = std::move(u2);
    res.element = c;
    return true;
  }
  return false;
}

// Float splitting by eigenvalue clusters; conjugate clusters are merged.
bool try_split(const Matrix<double>& c, CommutantSplit<double>& res, Tolerance) {
  const std::size_t n = c.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(c), false);
  const auto ev = es.eigenvalues();
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  const double ctol = 1e-6 * scale;
  std::vector<int> group(n, -1);
  std::vector<std::complex<double>> centers;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> z(ev[i].real(), std::abs(ev[i].imag()));
    for (std::size_t g = 0; g < centers.size(); ++g)
      if (std::abs(centers[g] - z) < ctol) {
        group[i] = static_cast<int>(g);
        break;
      }
    if (group[i] < 0) {
      group[i] = static_cast<int>(centers.size());
      centers.push_back(z);
    }
  }
  if (centers.size() < 2) return false;
  res.decomposable = true;
  if (!res.element) res.element = c;
  auto poly_of = [&](bool in_first) {
    std::vector<std::complex<double>> p{1.0};
    for (std::size_t i = 0; i < n; ++i) {
      if ((group[i] == 0) != in_first) continue;
      std::vector<std::complex<double>> q(p.size() + 1, 0.0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        q[k + 1] += p[k];
        q[k] -= p[k] * ev[i];
      }
      p = std::move(q);
    }
    Matrix<double> out(n, n);
    for (auto it = p.rbegin(); it != p.rend(); ++it)
      out = out * c + Matrix<double>::identity(n) * it->real();
    return out;
  };
  const Tolerance loose{1e-6};
  Subspace<double> u1(nullspace(poly_of(true), loose), n, loose);
  Subspace<double> u2(nullspace(poly_of(false), loose), n, loose);
  if (u1.dim() + u2.dim() != n || u1.dim() == 0 || u2.dim() == 0) return false;
  res.first = std::move(u1);
  res.second = std::move(u2);
  res.element = c;
  return true;
}

template <Scalar T>
std::vector<Subspace<T>> decompose(const std::vector<Matrix<T>>& ops, const Matrix<T>& gram,
                                   const Matrix<T>& embed, std::size_t ambient, Tolerance tol,
                                   std::uint64_t seed) {
  const auto split = commutant_split(ops, gram, tol, seed);
  if (!split.first) return {Subspace<T>(embed, ambient, tol)};
  std::vector<Subspace<T>> out;
  for (const auto* part : {&*split.first, &*split.second}) {
    auto sub = decompose(restrict_all(ops, *part, tol), restricted_gram(*part, gram),
                         Matrix<T>(embed * part->basis()), ambient, tol, seed);
    for (auto& s : sub) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

template <Scalar T>
LieAlgebraSpan<T> lie_closure(const std::vector<Matrix<T>>& generators, const Matrix<T>& gram,
                              Tolerance tol) {
  const std::size_t n = gram.rows();
  LieAlgebraSpan<T> out;
  out.gram = gram;
  out.generators = generators;
  out.basis = span_basis(generators, n, tol);
  const std::size_t cap = n * (n - (n > 0 ? 1 : 0)) / 2 + 1;
  for (std::size_t round = 0;; ++round) {
    if (round > cap) throw InternalError("bracket saturation did not stabilize");
    std::vector<Matrix<T>> all = out.basis;
    for (std::size_t i = 0; i < out.basis.size(); ++i)
      for (std::size_t j = i + 1; j < out.basis.size(); ++j)
        all.push_back(commutator(out.basis[i], out.basis[j]));
    auto next = span_basis(all, n, tol);
    if (next.size() == out.basis.size()) break;
    out.basis = std::move(next);
  }
  return out;
}

template <Scalar T>
LieAlgebraSpan<T> generate_holonomy(const std::vector<OlmosTensor<T>>& tensors,
                                    const SignatureSpace& space, Tolerance tol) {
  std::vector<Matrix<T>> ops;
  for (const auto& r : tensors) {
    if (r.space() != space) throw DimensionMismatch("tensors live on different spaces");
    for (auto& op : r.curvature_operators()) ops.push_back(std::move(op));
  }
  return lie_closure(ops, space.template gram<T>(), tol);
}

template <Scalar T>
std::vector<Matrix<T>> self_adjoint_commutant(const std::vector<Matrix<T>>& ops,
                                              const Matrix<T>& gram, Tolerance tol) {
  const std::size_t n = gram.rows();
  if (n == 0) return {};
  auto var = [n](std::size_t i, std::size_t j) { return i * n + j; };
  // Self-adjointness first, then one operator at a time on the current
  // solution space; small systems keep exact entries from growing.
  Matrix<T> c(n * n, n * n);
  for (std::size_t i = 0, row = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j, ++row)
      for (std::size_t k = 0; k < n; ++k) {
        c(row, var(k, j)) += gram(i, k);
        c(row, var(k, i)) -= gram(k, j);
      }
  Matrix<T> space = nullspace(c, tol);
  for (const auto& x : ops) {
    if (space.cols() <= 1) break;
    Matrix<T> cx(n * n, n * n);
    for (std::size_t i = 0, row = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j, ++row)
        for (std::size_t k = 0; k < n; ++k) {
          cx(row, var(i, k)) += x(k, j);
          cx(row, var(k, j)) -= x(i, k);
        }
    const Matrix<T> y = nullspace(Matrix<T>(cx * space), tol);
    space = space * y;
  }
  std::vector<Matrix<T>> out;
  for (std::size_t k = 0; k < space.cols(); ++k) out.push_back(unvectorize<T>(space.col(k), n, n));
  return out;
}

template <Scalar T>
CommutantSplit<T> commutant_split(const std::vector<Matrix<T>>& ops, const Matrix<T>& gram,
                                  Tolerance tol, std::uint64_t seed) {
  CommutantSplit<T> res;
  const std::size_t n = gram.rows();
  const auto comm = self_adjoint_commutant(ops, gram, tol);
  res.commutant_dim = comm.size();
  if (n <= 1 || comm.size() <= 1) return res;
  std::vector<Matrix<T>> candidates = comm;
  for (const auto& c : comm) candidates.push_back(c * c);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (int k = 0; k < 3; ++k) {
    Matrix<T> c(n, n);
    for (const auto& b : comm) c += b * ScalarTraits<T>::from_int(coeff(rng));
    candidates.push_back(c);
  }
  for (const auto& c : candidates)
    if (try_split(c, res, tol)) return res;
  return res;
}

template <Scalar T>
std::optional<Subspace<T>> find_invariant_isotropic(const std::vector<Matrix<T>>& ops,
                                                    const Matrix<T>& gram, Tolerance tol) {
  const std::size_t n = gram.rows();
  const std::size_t witt = witt_index(to_double_matrix(gram));
  if (witt == 0) return std::nullopt;
  std::vector<Matrix<T>> cands;
  cands.push_back(common_kernel(ops, n, tol).basis());
  // An invariant line carries a Lie character, so it is killed by [h,h]; the
  // derived and lower central series give the strongest candidates.
  std::vector<Matrix<T>> derived = ops, lower = ops;
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<Matrix<T>> nd, nl;
    for (std::size_t i = 0; i < derived.size(); ++i)
      for (std::size_t j = i + 1; j < derived.size(); ++j)
        nd.push_back(commutator(derived[i], derived[j]));
    for (const auto& x : ops)
      for (const auto& y : lower) nl.push_back(commutator(x, y));
    derived = span_basis(nd, n, tol);
    lower = span_basis(nl, n, tol);
    if (!derived.empty()) cands.push_back(common_kernel(derived, n, tol).basis());
    if (!lower.empty()) cands.push_back(common_kernel(lower, n, tol).basis());
    for (const auto& x : derived) cands.push_back(x);
  }
  const std::size_t single_cap = std::min<std::size_t>(ops.size(), 24);
  const std::size_t pair_cap = std::min<std::size_t>(ops.size(), 12);
  for (std::size_t i = 0; i < single_cap; ++i) {
    const auto& x = ops[i];
    const Matrix<T> x2 = x * x, x3 = x2 * x;
    for (const auto* m : {&x, &x2, &x3}) {
      cands.push_back(*m);
      cands.push_back(nullspace(*m, tol));
    }
  }
  for (std::size_t i = 0; i < pair_cap; ++i)
    for (std::size_t j = 0; j < pair_cap; ++j) {
      if (i == j) continue;
      const Matrix<T> xy = ops[i] * ops[j];
      cands.push_back(xy);
      cands.push_back(nullspace(xy, tol));
    }
  for (const auto& c : self_adjoint_commutant(ops, gram, tol)) {
    const Matrix<T> c2 = c * c;
    cands.push_back(c);
    cands.push_back(nullspace(c, tol));
    cands.push_back(c2);
  }
  std::optional<Subspace<T>> best;
  for (const auto& cand : cands) {
    if (cand.cols() == 0) continue;
    Subspace<T> u(cand, n, tol);
    if (u.dim() == 0 || u.dim() == n) continue;
    const auto hull = invariant_hull(u, ops, tol);
    auto rad = intersection(hull, orthogonal_complement(hull, gram, tol), tol);
    if (rad.dim() == 0 || (best && rad.dim() <= best->dim())) continue;
    if (!is_invariant(rad, ops, tol) || !is_isotropic(rad, gram, tol)) continue;
    best = std::move(rad);
    if (best->dim() == witt) break;
  }
  return best;
}

template <Scalar T>
SplittingReport<T> invariant_subspace_analysis(const LieAlgebraSpan<T>& h, Tolerance tol,
                                               std::uint64_t seed) {
  const std::size_t n = h.space_dim();
  SplittingReport<T> rep;
  rep.flat_part = common_kernel(h.basis, n, tol);
  const auto split = commutant_split(h.basis, h.gram, tol, seed);
  rep.commutant_dim = split.commutant_dim;
  if (split.decomposable) {
    rep.classification = Reducibility::Decomposable;
    if (split.first)
      rep.witness = split.first;
    else
      rep.certificate = split.element;
  } else {
    rep.isotropic = find_invariant_isotropic(h.basis, h.gram, tol);
    rep.classification =
        rep.isotropic ? Reducibility::WeaklyIrreducible : Reducibility::Irreducible;
  }
  if (n > 0) rep.summands = decompose(h.basis, h.gram, Matrix<T>::identity(n), n, tol, seed);
  return rep;
}

template <Scalar T>
LieAlgebraSpan<T> restrict_algebra(const LieAlgebraSpan<T>& g, const Subspace<T>& u,
                                   Tolerance tol) {
  LieAlgebraSpan<T> out;
  out.gram = restricted_gram(u, g.gram);
  out.generators = restrict_all(g.basis, u, tol);
  out.basis = span_basis(out.generators, u.dim(), tol);
  return out;
}

template <Scalar T>
BLResult<T> borel_lichnerowicz(const LieAlgebraSpan<T>& g, Tolerance tol, std::uint64_t seed) {
  const std::size_t n = g.space_dim();
  BLResult<T> res;
  const Subspace<T> e0 = common_kernel(g.basis, n, tol);
  const Subspace<T> rest = orthogonal_complement(e0, g.gram, tol);
  std::vector<Subspace<T>> modules;
  if (rest.dim() > 0) {
    const auto ops = restrict_all(g.basis, rest, tol);
    for (auto& s : decompose(ops, restricted_gram(rest, g.gram), rest.basis(), n, tol, seed))
      modules.push_back(std::move(s));
  }
  // g_j = {X in g : X E_i = 0 for i != j}
  std::vector<std::vector<Matrix<T>>> ideals;
  std::vector<Matrix<T>> all;
  for (std::size_t j = 0; j < modules.size(); ++j) {
    std::vector<Matrix<T>> cols;
    for (std::size_t i = 0; i < modules.size(); ++i)
      if (i != j) cols.push_back(modules[i].basis());
    std::vector<Matrix<T>> elems;
    if (cols.empty()) {
      elems = g.basis;
    } else {
      Matrix<T> other = cols[0];
      for (std::size_t k = 1; k < cols.size(); ++k) other = hconcat(other, cols[k]);
      const std::size_t block = n * other.cols();
      Matrix<T> c(block, g.dim());
      for (std::size_t k = 0; k < g.dim(); ++k) {
        const Matrix<T> img = g.basis[k] * other;
        for (std::size_t e = 0; e < block; ++e) c(e, k) = img.flat()[e];
      }
      const Matrix<T> ns = nullspace(c, tol);
      for (std::size_t s = 0; s < ns.cols(); ++s) {
        Matrix<T> x(n, n);
        for (std::size_t k = 0; k < g.dim(); ++k) x += g.basis[k] * ns(k, s);
        elems.push_back(x);
      }
    }
    elems = span_basis(elems, n, tol);
    for (const auto& x : elems) all.push_back(x);
    ideals.push_back(std::move(elems));
  }
  const auto sum = span_basis(all, n, tol);
  if (sum.size() != g.dim()) {
    NoBLWitness<T> w;
    w.all_modules = modules;
    for (const auto& x : g.basis)
      if (!in_span(x, sum, tol)) {
        w.element = x;
        break;
      }
    for (std::size_t i = 0; i < modules.size(); ++i)
      if (!(w.element * modules[i].basis()).is_zero(tol, w.element.max_abs()))
        w.modules.push_back(i);
    w.reason = "an element of g acts nontrivially on " + std::to_string(w.modules.size()) +
               " irreducible modules and lies in no single ideal g_j";
    res.witness = std::move(w);
    return res;
  }
  ScreenDecomposition<T> d;
  d.trivial_module = e0;
  for (std::size_t j = 0; j < modules.size(); ++j) {
    LieAlgebraSpan<T> ideal;
    ideal.gram = g.gram;
    ideal.generators = ideals[j];
    ideal.basis = ideals[j];
    const auto on_module = restrict_algebra(ideal, modules[j], tol);
    const auto a = invariant_subspace_analysis(on_module, tol, seed);
    d.ideal_irreducible.push_back(a.classification == Reducibility::Irreducible &&
                                  on_module.dim() > 0);
    d.ideals.push_back(std::move(ideal));
  }
  d.modules = std::move(modules);
  res.decomposition = std::move(d);
  return res;
}

// ---------------------------------------------------------------------------

template <Scalar T>
Matrix<T> CurvatureTable<T>::operator_at(std::size_t a, std::size_t b) const {
  const std::size_t n = dim();
  Matrix<T> cov(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < n; ++d) cov(d, c) = at(a, b, c, d);
  return inverse(gram) * cov;
}

template <Scalar T>
bool CurvatureTable<T>::is_zero(Tolerance tol) const {
  for (const auto& v : values)
    if (!ScalarTraits<T>::is_zero(v, 1.0, tol)) return false;
  return true;
}

template <Scalar T>
CurvatureTable<T> restrict_tensor(const OlmosTensor<T>& r, const Matrix<T>& basis) {
  const std::size_t n = r.dim(), k = basis.cols();
  if (basis.rows() != n) throw DimensionMismatch("restrict_tensor");
  CurvatureTable<T> out;
  out.gram = basis.transpose() * r.space().template gram<T>() * basis;
  out.values.assign(k * k * k * k, ScalarTraits<T>::zero());
  std::vector<Vector<T>> cols;
  for (std::size_t i = 0; i < k; ++i) cols.push_back(basis.col(i));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < k; ++d)
          out.at(a, b, c, d) = r.evaluate(cols[a], cols[b], cols[c], cols[d]);
  return out;
}

template <Scalar T>
T screen_scalar_curvature(const CurvatureTable<T>& r) {
  const std::size_t n = r.dim();
  if (n == 0) return ScalarTraits<T>::zero();
  const Matrix<T> s = inverse(r.gram);
  T sum = ScalarTraits<T>::zero();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) sum += s(a, d) * s(b, c) * r.at(a, b, c, d);
  return sum;
}

template <Scalar T>
HolonomySystemReport<T> holonomy_system_check(const CurvatureTable<T>& r,
                                              const LieAlgebraSpan<T>& g, Tolerance tol) {
  const std::size_t n = r.dim();
  if (g.space_dim() != n) throw DimensionMismatch("holonomy_system_check");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!in_span(r.operator_at(a, b), g.basis, tol))
        throw TensorNotInAlgebra("R(b" + std::to_string(a + 1) + ", b" + std::to_string(b + 1) +
                                 ") is not in span(g)");
  HolonomySystemReport<T> rep;
  rep.module_dim = n;
  rep.irreducible =
      g.dim() > 0 && invariant_subspace_analysis(g, tol).classification == Reducibility::Irreducible;
  rep.nonzero = !r.is_zero(tol);
  rep.scal = screen_scalar_curvature(r);
  rep.symmetric_flag = rep.irreducible && !ScalarTraits<T>::is_zero(rep.scal, 1.0, tol);
  return rep;
}

template <Scalar T>
std::vector<KeyLemmaEntry> keylemma_check(const ScreenDecomposition<T>& d, Tolerance tol) {
  std::vector<KeyLemmaEntry> out;
  for (std::size_t j = 0; j < d.ideals.size(); ++j) {
    const auto local = restrict_algebra(d.ideals[j], d.modules[j], tol);
    KeyLemmaEntry e;
    e.dim_k = curvature_space(local.basis, d.modules[j].dim(), tol).dim();
    e.nonzero = e.dim_k > 0;
    out.push_back(e);
  }
  return out;
}

#define NORMHOL_INSTANTIATE(T)                                                                  \
  template struct CurvatureTable<T>;                                                           \
  template LieAlgebraSpan<T> lie_closure(const std::vector<Matrix<T>>&, const Matrix<T>&,      \
                                         Tolerance);                                           \
  template LieAlgebraSpan<T> generate_holonomy(const std::vector<OlmosTensor<T>>&,             \
                                               const SignatureSpace&, Tolerance);              \
  template std::vector<Matrix<T>> self_adjoint_commutant(const std::vector<Matrix<T>>&,        \
                                                         const Matrix<T>&, Tolerance);         \
  template CommutantSplit<T> commutant_split(const std::vector<Matrix<T>>&, const Matrix<T>&,  \
                                             Tolerance, std::uint64_t);                        \
  template std::optional<Subspace<T>> find_invariant_isotropic(                                \
      const std::vector<Matrix<T>>&, const Matrix<T>&, Tolerance);                             \
  template SplittingReport<T> invariant_subspace_analysis(const LieAlgebraSpan<T>&, Tolerance, \
                                                          std::uint64_t);                      \
  template LieAlgebraSpan<T> restrict_algebra(const LieAlgebraSpan<T>&, const Subspace<T>&,    \
                                              Tolerance);                                      \
  template BLResult<T> borel_lichnerowicz(const LieAlgebraSpan<T>&, Tolerance, std::uint64_t); \
  template CurvatureTable<T> restrict_tensor(const OlmosTensor<T>&, const Matrix<T>&);         \
  template T screen_scalar_curvature(const CurvatureTable<T>&);                                \
  template HolonomySystemReport<T> holonomy_system_check(const CurvatureTable<T>&,             \
                                                         const LieAlgebraSpan<T>&, Tolerance); \
  template std::vector<KeyLemmaEntry> keylemma_check(const ScreenDecomposition<T>&, Tolerance);

NORMHOL_INSTANTIATE(Rational)
NORMHOL_INSTANTIATE(double)

#undef NORMHOL_INSTANTIATE

}  // namespace normhol
