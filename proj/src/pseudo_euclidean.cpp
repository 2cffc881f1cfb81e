#include "normhol/pseudo_euclidean.hpp"

#include <string>

namespace normhol {

std::string SignatureSpace::label(std::size_t index) const {
  if (index < p_) return "v" + std::to_string(index + 1);
  if (index < p_ + q_) return "e" + std::to_string(index - p_ + 1);
  if (index < dim()) return "w" + std::to_string(index - p_ - q_ + 1);
  throw DimensionMismatch("basis index " + std::to_string(index) + " out of range");
}

std::size_t SignatureSpace::index_of(const std::string& label) const {
  if (label.size() < 2) throw InvalidInput("bad basis label '" + label + "'");
  std::size_t k = 0;
  try {
    k = std::stoul(label.substr(1));
  } catch (const std::exception&) {
    throw InvalidInput("bad basis label '" + label + "'");
  }
  if (k == 0) throw InvalidInput("basis labels are 1-based: '" + label + "'");
  const std::size_t i = k - 1;
  switch (label[0]) {
    case 'v':
      if (i < p_) return v_index(i);
      break;
    case 'e':
      if (i < q_) return e_index(i);
      break;
    case 'w':
      if (i < p_) return w_index(i);
      break;
    default:
      break;
  }
  throw InvalidInput("basis label '" + label + "' not in signature (p=" + std::to_string(p_) +
                     ", q=" + std::to_string(q_) + ")");
}

// ---------------------------------------------------------------------------

template <Scalar T>
Subspace<T>::Subspace(const Matrix<T>& spanning, std::size_t ambient_dim, Tolerance tol)
    : ambient_(ambient_dim) {
  if (spanning.rows() != ambient_dim) throw DimensionMismatch("subspace spanning set");
  if (spanning.cols() == 0) {
    basis_ = Matrix<T>(ambient_dim, 0);
    return;
  }
  basis_ = row_space(spanning.transpose(), tol).transpose();
}

template <Scalar T>
std::vector<std::size_t> Subspace<T>::pivots() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < basis_.cols(); ++c)
    for (std::size_t r = 0; r < basis_.rows(); ++r)
      if (!ScalarTraits<T>::is_zero(basis_(r, c), 0.0, Tolerance{0.0})) {
        out.push_back(r);
        break;
      }
  return out;
}

template <Scalar T>
bool Subspace<T>::contains(const Vector<T>& x, Tolerance tol) const {
  if (x.size() != ambient_) throw DimensionMismatch("subspace membership");
  Matrix<T> aug = hconcat(basis_, Matrix<T>::column(std::span<const T>(x)));
  return rank(aug, tol) == dim();
}

template <Scalar T>
bool Subspace<T>::contains(const Subspace& other, Tolerance tol) const {
  if (other.ambient_ != ambient_) throw DimensionMismatch("subspace containment");
  return rank(hconcat(basis_, other.basis_), tol) == dim();
}

template <Scalar T>
Subspace<T> subspace_sum(const Subspace<T>& a, const Subspace<T>& b, Tolerance tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace sum");
  return Subspace<T>(hconcat(a.basis(), b.basis()), a.ambient_dim(), tol);
}

template <Scalar T>
Subspace<T> intersection(const Subspace<T>& a, const Subspace<T>& b, Tolerance tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace intersection");
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace<T>::zero(n);
  const Matrix<T> k = nullspace(hconcat(a.basis(), -b.basis()), tol);
  const Matrix<T> coeff = k.block(0, 0, a.dim(), k.cols());
  return Subspace<T>(a.basis() * coeff, n, tol);
}

template <Scalar T>
Subspace<T> orthogonal_complement(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol) {
  const std::size_t n = u.ambient_dim();
  if (gram.rows() != n || gram.cols() != n) throw DimensionMismatch("orthogonal complement");
  if (u.dim() == 0) return Subspace<T>::full(n);
  return Subspace<T>(nullspace(u.basis().transpose() * gram, tol), n, tol);
}

template <Scalar T>
Matrix<T> restricted_gram(const Subspace<T>& u, const Matrix<T>& gram) {
  return u.basis().transpose() * gram * u.basis();
}

template <Scalar T>
bool is_nondegenerate(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol) {
  return rank(restricted_gram(u, gram), tol) == u.dim();
}

template <Scalar T>
bool is_isotropic(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol) {
  return restricted_gram(u, gram).is_zero(tol, gram.max_abs());
}

template <Scalar T>
bool is_invariant(const Subspace<T>& u, const std::vector<Matrix<T>>& ops, Tolerance tol) {
  for (const auto& op : ops) {
    const Matrix<T> image = op * u.basis();
    if (rank(hconcat(u.basis(), image), tol) != u.dim()) return false;
  }
  return true;
}

template <Scalar T>
Subspace<T> invariant_hull(const Subspace<T>& u, const std::vector<Matrix<T>>& ops,
                           Tolerance tol) {
  Subspace<T> cur = u;
  for (std::size_t round = 0; round <= u.ambient_dim(); ++round) {
    Matrix<T> acc = cur.basis();
    for (const auto& op : ops) acc = hconcat(acc, op * cur.basis());
    Subspace<T> next(acc, u.ambient_dim(), tol);
    if (next.dim() == cur.dim()) return next;
    cur = std::move(next);
  }
  return cur;
}

template <Scalar T>
Matrix<T> restrict_operator(const Matrix<T>& op, const Subspace<T>& u, Tolerance tol) {
  auto coords = solve(u.basis(), op * u.basis(), tol);
  if (!coords) throw InvalidInput("operator does not preserve the subspace");
  return *coords;
}

template <Scalar T>
T inner_product(const Vector<T>& x, const Vector<T>& y, const SignatureSpace& space) {
  if (x.size() != space.dim() || y.size() != space.dim())
    throw DimensionMismatch("inner_product expects vectors of dimension " +
                            std::to_string(space.dim()));
  const Vector<T> gy = space.gram<T>() * y;
  return dot<T>(x, gy);
}

template <Scalar T>
bool is_metric_skew(const Matrix<T>& op, const Matrix<T>& gram, Tolerance tol) {
  if (!op.square() || op.rows() != gram.rows()) throw DimensionMismatch("is_metric_skew");
  const Matrix<T> s = gram * op + op.transpose() * gram;
  return s.is_zero(tol, op.max_abs());
}

template <Scalar T>
bool is_metric_skew(const Matrix<T>& op, const SignatureSpace& space, Tolerance tol) {
  return is_metric_skew(op, space.gram<T>(), tol);
}

template <Scalar T>
Matrix<T> assemble_stabilizer(const StabilizerBlocks<T>& blk, const SignatureSpace& space) {
  const std::size_t p = space.p(), q = space.q();
  if (blk.a.rows() != p || blk.a.cols() != p || blk.b.rows() != q || blk.b.cols() != q ||
      blk.x.rows() != q || blk.x.cols() != p || blk.star.rows() != p || blk.star.cols() != p)
    throw DimensionMismatch("stabilizer block shapes");
  Matrix<T> m(space.dim(), space.dim());
  m.set_block(0, 0, blk.a);
  m.set_block(0, p, -blk.x.transpose());
  m.set_block(0, p + q, blk.star);
  m.set_block(p, p, blk.b);
  m.set_block(p, p + q, blk.x);
  m.set_block(p + q, p + q, -blk.a.transpose());
  return m;
}

template <Scalar T>
StabilizerBlocks<T> stabilizer_blocks(const Matrix<T>& op, const SignatureSpace& space,
                                      Tolerance tol) {
  const std::size_t p = space.p(), q = space.q(), n = space.dim();
  if (op.rows() != n || op.cols() != n) throw DimensionMismatch("stabilizer_blocks");
  if (!is_metric_skew(op, space, tol)) throw InvalidInput("operator is not metric-skew");
  // T preserves Xi iff rows p..n-1 of the v-columns vanish.
  const double scale = op.max_abs();
  for (std::size_t r = p; r < n; ++r)
    for (std::size_t c = 0; c < p; ++c)
      if (!ScalarTraits<T>::is_zero(op(r, c), scale, tol))
        throw NotInStabilizer("T v_" + std::to_string(c + 1) + " leaves Xi");
  StabilizerBlocks<T> blk;
  blk.a = op.block(0, 0, p, p);
  blk.b = op.block(p, p, q, q);
  blk.x = op.block(p, p + q, q, p);
  blk.star = op.block(0, p + q, p, p);
  return blk;
}

template <Scalar T>
Matrix<T> screen_projection(const Matrix<T>& op, const SignatureSpace& space, Tolerance tol) {
  return stabilizer_blocks(op, space, tol).b;
}

template <Scalar T>
Matrix<T> cayley_transform(const Matrix<T>& skew, Tolerance tol) {
  const auto id = Matrix<T>::identity(skew.rows());
  return inverse(id - skew, tol) * (id + skew);
}

template <Scalar T>
Subspace<T> isotropic_subspace(const SignatureSpace& space) {
  Matrix<T> b(space.dim(), space.p());
  for (std::size_t i = 0; i < space.p(); ++i) b(space.v_index(i), i) = ScalarTraits<T>::one();
  return Subspace<T>(b, space.dim());
}

template <Scalar T>
Subspace<T> screen_subspace(const SignatureSpace& space) {
  Matrix<T> b(space.dim(), space.q());
  for (std::size_t j = 0; j < space.q(); ++j) b(space.e_index(j), j) = ScalarTraits<T>::one();
  return Subspace<T>(b, space.dim());
}

#define NORMHOL_INSTANTIATE(T)                                                                 \
  template class Subspace<T>;                                                                 \
  template Subspace<T> subspace_sum(const Subspace<T>&, const Subspace<T>&, Tolerance);       \
  template Subspace<T> intersection(const Subspace<T>&, const Subspace<T>&, Tolerance);       \
  template Subspace<T> orthogonal_complement(const Subspace<T>&, const Matrix<T>&, Tolerance); \
  template bool is_nondegenerate(const Subspace<T>&, const Matrix<T>&, Tolerance);            \
  template bool is_isotropic(const Subspace<T>&, const Matrix<T>&, Tolerance);                \
  template bool is_invariant(const Subspace<T>&, const std::vector<Matrix<T>>&, Tolerance);   \
  template Subspace<T> invariant_hull(const Subspace<T>&, const std::vector<Matrix<T>>&,      \
                                      Tolerance);                                             \
  template Matrix<T> restricted_gram(const Subspace<T>&, const Matrix<T>&);                   \
  template Matrix<T> restrict_operator(const Matrix<T>&, const Subspace<T>&, Tolerance);      \
  template T inner_product(const Vector<T>&, const Vector<T>&, const SignatureSpace&);        \
  template bool is_metric_skew(const Matrix<T>&, const Matrix<T>&, Tolerance);                \
  template bool is_metric_skew(const Matrix<T>&, const SignatureSpace&, Tolerance);           \
  template Matrix<T> assemble_stabilizer(const StabilizerBlocks<T>&, const SignatureSpace&);  \
  template StabilizerBlocks<T> stabilizer_blocks(const Matrix<T>&, const SignatureSpace&,     \
                                                 Tolerance);                                  \
  template Matrix<T> screen_projection(const Matrix<T>&, const SignatureSpace&, Tolerance);   \
  template Matrix<T> cayley_transform(const Matrix<T>&, Tolerance);                           \
  template Subspace<T> isotropic_subspace(const SignatureSpace&);                             \
  template Subspace<T> screen_subspace(const SignatureSpace&);

NORMHOL_INSTANTIATE(Rational)
NORMHOL_INSTANTIATE(double)

#undef NORMHOL_INSTANTIATE

}  // namespace normhol
