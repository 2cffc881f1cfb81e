#include "normhol/bbi.hpp"

#include <Eigen/Eigenvalues>

namespace normhol {

std::string to_string(BBIType t) {
  switch (t) {
    case BBIType::Type1:
      return "Type1";
    case BBIType::Type2:
      return "Type2";
    case BBIType::Type3:
      return "Type3";
    case BBIType::Type4:
      return "Type4";
    case BBIType::Irreducible:
      return "Irreducible";
    case BBIType::NotWeaklyIrreducible:
      return "NotWeaklyIrreducible";
  }
  return "unknown";
}

BBIType parse_bbi_type(const std::string& s) {
  for (auto t : {BBIType::Type1, BBIType::Type2, BBIType::Type3, BBIType::Type4,
                 BBIType::Irreducible, BBIType::NotWeaklyIrreducible})
    if (to_string(t) == s) return t;
  throw InvalidInput("unknown BBI type '" + s + "'");
}

namespace {

// (negative, positive) eigenvalue counts of a symmetric matrix.
template <Scalar T>
std::pair<std::size_t, std::size_t> inertia(const Matrix<T>& gram) {
  const auto d = to_double_matrix(gram);
  Eigen::MatrixXd e(d.rows(), d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) e(r, c) = d(r, c);
  if (e.rows() == 0) return {0, 0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::size_t neg = 0, pos = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] < -1e-9 * scale) ++neg;
    if (es.eigenvalues()[i] > 1e-9 * scale) ++pos;
  }
  return {neg, pos};
}

template <Scalar T>
bool lie_closed(const std::vector<Matrix<T>>& basis, Tolerance tol) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!in_span(commutator(basis[i], basis[j]), basis, tol)) return false;
  return true;
}

// Coordinates of x in the given basis (must exist).
template <Scalar T>
Vector<T> coords(const std::vector<Matrix<T>>& basis, const Matrix<T>& x, Tolerance tol) {
  const std::size_t n2 = x.rows() * x.cols();
  Matrix<T> a(n2, basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t e = 0; e < n2; ++e) a(e, k) = basis[k].flat()[e];
  auto c = solve(a, vectorize(x), tol);
  if (!c) throw InternalError("element outside its algebra");
  return *c;
}

template <Scalar T>
bool all_zero(const Vector<T>& v, Tolerance tol, double scale = 1.0) {
  for (const auto& x : v)
    if (!ScalarTraits<T>::is_zero(x, scale, tol)) return false;
  return true;
}

}  // namespace

template <Scalar T>
AdaptedFrame<T> adapted_frame(const Matrix<T>& gram, const Vector<T>& v, Tolerance tol) {
  const std::size_t n = gram.rows();
  if (v.size() != n) throw DimensionMismatch("adapted_frame");
  const Vector<T> gv = gram * v;
  if (!ScalarTraits<T>::is_zero(dot<T>(v, gv), 1.0, tol))
    throw InvalidInput("adapted_frame needs a null vector");
  std::size_t k = n;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = ScalarTraits<T>::magnitude(gv[i]);
    if (mag > best * (1.0 + 1e-12) && !ScalarTraits<T>::is_zero(gv[i], 1.0, tol)) {
      if constexpr (ScalarTraits<T>::exact) {
        k = i;
        break;
      }
      best = mag;
      k = i;
    }
  }
  if (k == n) throw DegenerateMetric("null vector is in the radical of the gram");
  Vector<T> u(n, ScalarTraits<T>::zero());
  u[k] = ScalarTraits<T>::one() / gv[k];
  const T uu = dot<T>(u, gram * u);
  Vector<T> w = u;
  for (std::size_t i = 0; i < n; ++i) w[i] -= uu * ScalarTraits<T>::from_ratio(1, 2) * v[i];
  Matrix<T> vw(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    vw(i, 0) = v[i];
    vw(i, 1) = w[i];
  }
  const auto screen = orthogonal_complement(Subspace<T>(vw, n, tol), gram, tol);
  AdaptedFrame<T> out;
  out.frame = Matrix<T>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.frame(i, 0) = v[i];
    out.frame(i, n - 1) = w[i];
  }
  out.frame.set_block(0, 1, screen.basis());
  out.screen_gram = restricted_gram(screen, gram);
  return out;
}

template <Scalar T>
BBIClassification<T> classify_bbi(const LieAlgebraSpan<T>& h, Tolerance tol, std::uint64_t seed) {
  const std::size_t n = h.space_dim();
  const auto [neg, pos] = inertia(h.gram);
  if (n < 2 || neg != 1 || pos != n - 1)
    throw SignatureMismatch("classify_bbi expects a Lorentzian gram of signature (1, m+1)");
  if (!lie_closed(h.basis, tol)) throw UnrecognizedStructure("input algebra is not Lie-closed");
  const std::size_t m = n - 2;
  BBIClassification<T> res;
  res.m = m;
  const auto rep = invariant_subspace_analysis(h, tol, seed);
  if (rep.classification == Reducibility::Irreducible) {
    res.type = BBIType::Irreducible;
    return res;
  }
  if (rep.classification == Reducibility::Decomposable) {
    res.type = BBIType::NotWeaklyIrreducible;
    return res;
  }
  const auto frame = adapted_frame(h.gram, rep.isotropic->basis().col(0), tol);
  res.frame = frame;
  const Matrix<T> finv = inverse(frame.frame, tol);
  const std::size_t d = h.dim();
  std::vector<T> a(d);
  std::vector<Matrix<T>> b(d);
  Matrix<T> xs(m, d);
  for (std::size_t k = 0; k < d; ++k) {
    const Matrix<T> y = finv * h.basis[k] * frame.frame;
    for (std::size_t i = 1; i < n; ++i)
      if (!ScalarTraits<T>::is_zero(y(i, 0), y.max_abs(), tol))
        throw UnrecognizedStructure("algebra does not stabilize the null line");
    a[k] = y(0, 0);
    b[k] = y.block(1, 1, m, m);
    for (std::size_t i = 0; i < m; ++i) xs(i, k) = y(1 + i, n - 1);
  }
  res.g = span_basis(b, m, tol);
  // Coefficient relations: rows for the R-part and for the so(m)-part.
  Matrix<T> rel(1 + m * m, d);
  for (std::size_t k = 0; k < d; ++k) {
    rel(0, k) = a[k];
    for (std::size_t e = 0; e < m * m; ++e) rel(1 + e, k) = b[k].flat()[e];
  }
  const Matrix<T> pure = nullspace(rel, tol);
  const Subspace<T> t0(xs * pure, m, tol);
  const bool no_r_part = all_zero(Vector<T>(a.begin(), a.end()), tol);
  auto preimage = [&](const Matrix<T>& gi) {
    Matrix<T> bm(m * m, d);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t e = 0; e < m * m; ++e) bm(e, k) = b[k].flat()[e];
    auto c = solve(bm, vectorize(gi), tol);
    if (!c) throw InternalError("screen basis element without preimage");
    return *c;
  };
  auto vanishes_on_derived = [&](auto&& value_zero) {
    for (std::size_t i = 0; i < res.g.size(); ++i)
      for (std::size_t j = i + 1; j < res.g.size(); ++j)
        if (!value_zero(coords(res.g, commutator(res.g[i], res.g[j]), tol))) return false;
    return true;
  };
  if (no_r_part) {
    if (t0.dim() == m) {
      res.type = BBIType::Type2;
      return res;
    }
    const std::size_t ell = t0.dim();
    if (ell == 0) throw UnrecognizedStructure("no free null translations");
    const auto tperp = orthogonal_complement(t0, frame.screen_gram, tol);
    for (const auto& bk : b)
      if (!(bk * tperp.basis()).is_zero(tol, bk.max_abs()))
        throw UnrecognizedStructure("screen algebra acts on the complement of the free translations");
    const Matrix<T> split = hconcat(t0.basis(), tperp.basis());
    for (const auto& gi : res.g) {
      const Vector<T> c = preimage(gi);
      const Vector<T> x = xs * c;
      auto all = solve(split, x, tol);
      if (!all) throw InternalError("translation splitting failed");
      Vector<T> psi(m - ell);
      for (std::size_t i = 0; i < m - ell; ++i) psi[i] = -(*all)[ell + i];
      res.psi.push_back(std::move(psi));
    }
    Matrix<T> psim(m - ell, res.g.size());
    for (std::size_t i = 0; i < res.g.size(); ++i)
      for (std::size_t r = 0; r < m - ell; ++r) psim(r, i) = res.psi[i][r];
    if (rank(psim, tol) != m - ell) throw UnrecognizedStructure("psi is not surjective");
    if (!vanishes_on_derived([&](const Vector<T>& c) { return all_zero(Vector<T>(psim * c), tol); }))
      throw UnrecognizedStructure("psi does not vanish on [g,g]");
    res.type = BBIType::Type4;
    res.ell = ell;
    return res;
  }
  if (t0.dim() != m) throw UnrecognizedStructure("R-part present but translations are not full");
  Matrix<T> bm(m * m, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t e = 0; e < m * m; ++e) bm(e, k) = b[k].flat()[e];
  const Matrix<T> kernel = nullspace(bm, tol);
  for (std::size_t s = 0; s < kernel.cols(); ++s) {
    T val = ScalarTraits<T>::zero();
    for (std::size_t k = 0; k < d; ++k) val += kernel(k, s) * a[k];
    if (!ScalarTraits<T>::is_zero(val, 1.0, tol)) {
      res.type = BBIType::Type1;
      return res;
    }
  }
  for (const auto& gi : res.g) {
    const Vector<T> c = preimage(gi);
    T val = ScalarTraits<T>::zero();
    for (std::size_t k = 0; k < d; ++k) val += c[k] * a[k];
    res.phi.push_back(val);
  }
  if (!vanishes_on_derived([&](const Vector<T>& c) {
        return ScalarTraits<T>::is_zero(dot<T>(c, res.phi), 1.0, tol);
      }))
    throw UnrecognizedStructure("phi does not vanish on [g,g]");
  res.type = BBIType::Type3;
  return res;
}

template <Scalar T>
LieAlgebraSpan<T> construct_type(BBIType tag, const std::vector<Matrix<T>>& g, std::size_t m,
                                 const std::vector<T>& phi, const std::vector<Vector<T>>& psi,
                                 std::size_t ell, Tolerance tol) {
  const SignatureSpace s(1, m);
  const std::size_t k = tag == BBIType::Type4 ? ell : m;
  if (tag == BBIType::Type4 && (ell == 0 || ell >= m))
    throw InvalidEpimorphism("Type4 needs 0 < ell < m");
  for (const auto& x : g)
    if (x.rows() != k || x.cols() != k) throw DimensionMismatch("screen algebra size");
  const auto gb = span_basis(g, k, tol);
  if (!lie_closed(gb, tol)) throw NotLieClosed("screen algebra is not Lie-closed");
  for (const auto& x : gb)
    if (!(x + x.transpose()).is_zero(tol, x.max_abs()))
      throw InvalidInput("screen algebra element is not skew");
  auto elem = [&](const T& a, const Matrix<T>& b, const Vector<T>& x) {
    StabilizerBlocks<T> blk;
    blk.a = Matrix<T>(1, 1);
    blk.a(0, 0) = a;
    blk.b = b;
    blk.x = Matrix<T>(m, 1);
    for (std::size_t i = 0; i < m; ++i) blk.x(i, 0) = x[i];
    blk.star = Matrix<T>(1, 1);
    return assemble_stabilizer(blk, s);
  };
  const T zero = ScalarTraits<T>::zero(), one = ScalarTraits<T>::one();
  const Vector<T> no_x(m, zero);
  const Matrix<T> no_b(m, m);
  auto unit = [&](std::size_t j, const T& sign) {
    Vector<T> e(m, zero);
    e[j] = sign;
    return e;
  };
  auto check_derived = [&](auto&& value_zero) {
    for (std::size_t i = 0; i < gb.size(); ++i)
      for (std::size_t j = i + 1; j < gb.size(); ++j)
        if (!value_zero(coords(gb, commutator(gb[i], gb[j]), tol)))
          throw InvalidEpimorphism("functional does not vanish on [g,g]");
  };
  std::vector<Matrix<T>> gens;
  switch (tag) {
    case BBIType::Type1:
      gens.push_back(elem(one, no_b, no_x));
      [[fallthrough]];
    case BBIType::Type2:
      for (const auto& x : gb) gens.push_back(elem(zero, x, no_x));
      for (std::size_t j = 0; j < m; ++j) gens.push_back(elem(zero, no_b, unit(j, one)));
      break;
    case BBIType::Type3: {
      if (phi.size() != gb.size()) throw InvalidEpimorphism("phi needs one value per basis element of g");
      if (all_zero(phi, tol)) throw InvalidEpimorphism("phi is not surjective");
      check_derived([&](const Vector<T>& c) { return ScalarTraits<T>::is_zero(dot<T>(c, phi), 1.0, tol); });
      for (std::size_t i = 0; i < gb.size(); ++i) gens.push_back(elem(phi[i], gb[i], no_x));
      for (std::size_t j = 0; j < m; ++j) gens.push_back(elem(zero, no_b, unit(j, one)));
      break;
    }
    case BBIType::Type4: {
      const std::size_t r = m - ell;
      if (psi.size() != gb.size()) throw InvalidEpimorphism("psi needs one value per basis element of g");
      Matrix<T> psim(r, gb.size());
      for (std::size_t i = 0; i < gb.size(); ++i) {
        if (psi[i].size() != r) throw InvalidEpimorphism("psi values must lie in R^{m-ell}");
        for (std::size_t j = 0; j < r; ++j) psim(j, i) = psi[i][j];
      }
      if (rank(psim, tol) != r) throw InvalidEpimorphism("psi is not surjective");
      check_derived([&](const Vector<T>& c) { return all_zero(Vector<T>(psim * c), tol); });
      for (std::size_t i = 0; i < gb.size(); ++i) {
        Matrix<T> b(m, m);
        b.set_block(r, r, gb[i]);
        Vector<T> x(m, zero);
        for (std::size_t j = 0; j < r; ++j) x[j] = -psi[i][j];
        gens.push_back(elem(zero, b, x));
      }
      for (std::size_t j = r; j < m; ++j) gens.push_back(elem(zero, no_b, unit(j, -one)));
      break;
    }
    default:
      throw InvalidInput("construct_type supports Type1..Type4 only");
  }
  return lie_closure(gens, s.template gram<T>(), tol);
}

template <Scalar T>
LorentzianSplitting<T> lorentzian_splitting(const LieAlgebraSpan<T>& hol,
                                            const std::vector<OlmosTensor<T>>& tensors,
                                            Tolerance tol, std::uint64_t seed) {
  const std::size_t n = hol.space_dim();
  const auto [neg, pos] = inertia(hol.gram);
  if (neg != 1 || pos != n - 1) throw SignatureMismatch("lorentzian_splitting expects signature (1, N)");
  LorentzianSplitting<T> out;
  out.report = invariant_subspace_analysis(hol, tol, seed);
  Matrix<T> flat(n, 0);
  for (const auto& u : out.report.summands) {
    const auto local = restrict_algebra(hol, u, tol);
    if (local.dim() == 0) {
      flat = hconcat(flat, u.basis());
      continue;
    }
    const auto [uneg, upos] = inertia(local.gram);
    (void)upos;
    if (uneg == 0) {
      out.riemannian.push_back(u);
      out.riemannian_irreducible.push_back(
          invariant_subspace_analysis(local, tol, seed).classification == Reducibility::Irreducible);
      std::vector<HolonomySystemReport<T>> reports;
      for (const auto& r : tensors)
        reports.push_back(holonomy_system_check(restrict_tensor(r, u.basis()), local, tol));
      out.riemannian_reports.push_back(std::move(reports));
    } else {
      if (out.lorentzian) throw InternalError("two Lorentzian factors");
      out.lorentzian = u;
      out.lorentzian_class = classify_bbi(local, tol, seed);
    }
  }
  out.flat = Subspace<T>(flat, n, tol);
  return out;
}

#define NORMHOL_INSTANTIATE(T)                                                                  \
  template AdaptedFrame<T> adapted_frame(const Matrix<T>&, const Vector<T>&, Tolerance);       \
  template BBIClassification<T> classify_bbi(const LieAlgebraSpan<T>&, Tolerance, std::uint64_t); \
  template LieAlgebraSpan<T> construct_type(BBIType, const std::vector<Matrix<T>>&, std::size_t, \
                                            const std::vector<T>&, const std::vector<Vector<T>>&, \
                                            std::size_t, Tolerance);                           \
  template LorentzianSplitting<T> lorentzian_splitting(                                        \
      const LieAlgebraSpan<T>&, const std::vector<OlmosTensor<T>>&, Tolerance, std::uint64_t);

NORMHOL_INSTANTIATE(Rational)
NORMHOL_INSTANTIATE(double)

#undef NORMHOL_INSTANTIATE

}  // namespace normhol
