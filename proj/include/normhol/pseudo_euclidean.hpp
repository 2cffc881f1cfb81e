#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "normhol/matrix.hpp"

namespace normhol {

/// The normal fiber R^{p,q+p} with basis ordered (v_1..v_p, e_1..e_q, w_1..w_p),
/// where Xi = span(v_i) is isotropic, <e_i,e_j> = <v_i,w_j> = delta_ij and all
/// other pairings vanish.
class SignatureSpace {
 public:
  SignatureSpace() = default;
  SignatureSpace(std::size_t p, std::size_t q) : p_(p), q_(q) {}

  std::size_t p() const { return p_; }
  std::size_t q() const { return q_; }
  std::size_t dim() const { return 2 * p_ + q_; }

  std::size_t v_index(std::size_t i) const { return i; }
  std::size_t e_index(std::size_t j) const { return p_ + j; }
  std::size_t w_index(std::size_t i) const { return p_ + q_ + i; }

  /// "v1", "e3", "w2", ...
  std::string label(std::size_t index) const;
  /// Inverse of label(); throws InvalidInput for unknown labels.
  std::size_t index_of(const std::string& label) const;

  template <Scalar T>
  Matrix<T> gram() const {
    Matrix<T> g(dim(), dim());
    for (std::size_t i = 0; i < p_; ++i) {
      g(v_index(i), w_index(i)) = ScalarTraits<T>::one();
      g(w_index(i), v_index(i)) = ScalarTraits<T>::one();
    }
    for (std::size_t j = 0; j < q_; ++j) g(e_index(j), e_index(j)) = ScalarTraits<T>::one();
    return g;
  }

  template <Scalar T>
  Vector<T> basis_vector(std::size_t index) const {
    Vector<T> x(dim(), ScalarTraits<T>::zero());
    x.at(index) = ScalarTraits<T>::one();
    return x;
  }

  friend bool operator==(const SignatureSpace&, const SignatureSpace&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t q_ = 0;
};

/// Linear subspace stored as columns in canonical form: the transpose of the
/// reduced row echelon basis (lexicographic pivots), so equal subspaces have
/// identical representations.
template <Scalar T>
class Subspace {
 public:
  Subspace() = default;
  /// Spanning vectors as columns (dependent columns allowed).
  Subspace(const Matrix<T>& spanning, std::size_t ambient_dim, Tolerance tol = {});

  static Subspace zero(std::size_t n) { return Subspace(Matrix<T>(n, 0), n); }
  static Subspace full(std::size_t n) { return Subspace(Matrix<T>::identity(n), n); }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix<T>& basis() const { return basis_; }
  std::vector<std::size_t> pivots() const;

  bool contains(const Vector<T>& x, Tolerance tol = {}) const;
  bool contains(const Subspace& other, Tolerance tol = {}) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  Matrix<T> basis_;
};

template <Scalar T>
Subspace<T> subspace_sum(const Subspace<T>& a, const Subspace<T>& b, Tolerance tol = {});
template <Scalar T>
Subspace<T> intersection(const Subspace<T>& a, const Subspace<T>& b, Tolerance tol = {});
/// {x : x^T gram u = 0 for all u in U}.
template <Scalar T>
Subspace<T> orthogonal_complement(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol = {});
/// Rank of the gram restricted to U equals dim U.
template <Scalar T>
bool is_nondegenerate(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol = {});
/// Gram vanishes identically on U.
template <Scalar T>
bool is_isotropic(const Subspace<T>& u, const Matrix<T>& gram, Tolerance tol = {});
/// Every operator maps U into U.
template <Scalar T>
bool is_invariant(const Subspace<T>& u, const std::vector<Matrix<T>>& ops, Tolerance tol = {});
/// Smallest subspace containing U and stable under all operators.
template <Scalar T>
Subspace<T> invariant_hull(const Subspace<T>& u, const std::vector<Matrix<T>>& ops,
                           Tolerance tol = {});
/// Restricted gram B^T G B in the canonical basis of U.
template <Scalar T>
Matrix<T> restricted_gram(const Subspace<T>& u, const Matrix<T>& gram);
/// Coordinates of an operator preserving U with respect to U's canonical basis.
template <Scalar T>
Matrix<T> restrict_operator(const Matrix<T>& op, const Subspace<T>& u, Tolerance tol = {});

/// x^T gram y for the canonical gram of `space`.
template <Scalar T>
T inner_product(const Vector<T>& x, const Vector<T>& y, const SignatureSpace& space);

/// gram T + T^T gram = 0.
template <Scalar T>
bool is_metric_skew(const Matrix<T>& op, const Matrix<T>& gram, Tolerance tol = {});
template <Scalar T>
bool is_metric_skew(const Matrix<T>& op, const SignatureSpace& space, Tolerance tol = {});

/// Blocks of an element of Stab_{so}(Xi):
///
///   [ A   -X^T   star ]
///   [ 0    B     X    ]
///   [ 0    0    -A^T  ]
///
/// X has the translation vectors X_1..X_p as columns.
template <Scalar T>
struct StabilizerBlocks {
  Matrix<T> a;     ///< p x p, gl(p)
  Matrix<T> b;     ///< q x q, so(q)
  Matrix<T> x;     ///< q x p
  Matrix<T> star;  ///< p x p, skew

  friend bool operator==(const StabilizerBlocks&, const StabilizerBlocks&) = default;
};

template <Scalar T>
Matrix<T> assemble_stabilizer(const StabilizerBlocks<T>& blocks, const SignatureSpace& space);
/// Throws NotInStabilizer when T does not preserve Xi, InvalidInput when T is not metric-skew.
template <Scalar T>
StabilizerBlocks<T> stabilizer_blocks(const Matrix<T>& op, const SignatureSpace& space,
                                      Tolerance tol = {});
/// The so(q) block B; throws NotInStabilizer.
template <Scalar T>
Matrix<T> screen_projection(const Matrix<T>& op, const SignatureSpace& space, Tolerance tol = {});

/// Cayley transform (I - X)^{-1}(I + X); gram-orthogonal whenever X is gram-skew.
template <Scalar T>
Matrix<T> cayley_transform(const Matrix<T>& skew, Tolerance tol = {});

/// Xi = span(v_1..v_p).
template <Scalar T>
Subspace<T> isotropic_subspace(const SignatureSpace& space);
/// E = span(e_1..e_q).
template <Scalar T>
Subspace<T> screen_subspace(const SignatureSpace& space);

}  // namespace normhol
