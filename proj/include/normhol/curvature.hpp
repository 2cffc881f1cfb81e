#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "normhol/pseudo_euclidean.hpp"

namespace normhol {

/// Shape operators A_xi of a spacelike submanifold at one point, one symmetric
/// tangent_dim x tangent_dim matrix per normal basis vector (in basis order).
/// A_xi for other normal vectors is the linear extension.
template <Scalar T>
struct ShapeFamily {
  std::size_t tangent_dim = 0;
  SignatureSpace space;
  std::vector<Matrix<T>> operators;

  /// Checks sizes and symmetry; throws DimensionMismatch / InvalidInput.
  void validate(Tolerance tol = {}) const;
  Matrix<T> shape_operator(const Vector<T>& xi) const;
};

/// Algebraic curvature tensor on the normal fiber stored as the covariant
/// table values[a][b][c][d] = <R(xi_a, xi_b) xi_c, xi_d> over the fixed basis.
template <Scalar T>
class OlmosTensor {
 public:
  OlmosTensor() = default;
  explicit OlmosTensor(SignatureSpace space);

  const SignatureSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }

  T& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return values_[index(a, b, c, d)];
  }
  const T& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return values_[index(a, b, c, d)];
  }
  /// <R(x,y)z,u> for arbitrary vectors (multilinear extension).
  T evaluate(const Vector<T>& x, const Vector<T>& y, const Vector<T>& z,
             const Vector<T>& u) const;

  /// Matrix of the endomorphism R(xi_a, xi_b).
  Matrix<T> operator_at(std::size_t a, std::size_t b) const;
  /// Matrix of R(x, y).
  Matrix<T> operator_for(const Vector<T>& x, const Vector<T>& y) const;
  /// All R(xi_a, xi_b), a < b.
  std::vector<Matrix<T>> curvature_operators() const;

  bool is_zero(Tolerance tol = {}) const;

  /// Accumulated conjugating transport (tau), if any.
  const std::optional<Matrix<T>>& transport() const { return transport_; }
  void set_transport(Matrix<T> tau) { transport_ = std::move(tau); }

  friend bool operator==(const OlmosTensor& a, const OlmosTensor& b) {
    return a.space_ == b.space_ && a.values_ == b.values_;
  }

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    const std::size_t n = dim();
    return ((a * n + b) * n + c) * n + d;
  }

  SignatureSpace space_;
  std::vector<T> values_;
  std::optional<Matrix<T>> transport_;
};

/// Per-identity outcome of the algebraic curvature tensor checks.
struct CurvatureIdentityReport {
  bool antisymmetric = false;     ///< R(x,y) = -R(y,x)
  bool skew_adjoint = false;      ///< <R(x,y)z,u> = -<z,R(x,y)u>
  bool pair_symmetric = false;    ///< <R(x,y)z,u> = <R(z,u)x,y>
  bool first_bianchi = false;
  bool all() const { return antisymmetric && skew_adjoint && pair_symmetric && first_bianchi; }
};

/// Normal curvature endomorphism R_perp(X, Y) from the Ricci equation
/// <R_perp(X,Y) xi_a, xi_b> = <[A_a, A_b] X, Y>.
template <Scalar T>
Matrix<T> normal_curvature(const ShapeFamily<T>& shapes, const Vector<T>& x, const Vector<T>& y);

/// The curvature tensor obtained by summing normal curvature over the images
/// of an orthonormal tangent frame under the shape operators.
template <Scalar T>
OlmosTensor<T> olmos_tensor(const ShapeFamily<T>& shapes);

template <Scalar T>
CurvatureIdentityReport check_curvature_identities(const OlmosTensor<T>& r, Tolerance tol = {});

/// True when <R(a,b)c,d> = -1/2 Tr([A_a,A_b][A_c,A_d]) on every basis 4-tuple.
template <Scalar T>
bool satisfies_trace_formula(const OlmosTensor<T>& r, const ShapeFamily<T>& shapes,
                             Tolerance tol = {});

/// tau^{-1} R(tau x, tau y) tau. Throws NonOrthogonalTransport unless tau preserves the gram.
template <Scalar T>
OlmosTensor<T> conjugate_tensor(const OlmosTensor<T>& r, const Matrix<T>& tau, Tolerance tol = {});

/// Screen parts of a curvature tensor: P0(e_a, e_b), P_i(e_a) and Q_ij as
/// q x q matrices of pr_E o R(..)|_E.
template <Scalar T>
struct ScreenComponents {
  SignatureSpace space;
  std::vector<std::vector<Matrix<T>>> p0;               ///< [a][b]
  std::vector<std::vector<Matrix<T>>> p;                ///< [i][a]
  std::vector<std::vector<Matrix<T>>> q;                ///< [i][j]

  /// Every P0, P_i and Q_ij value.
  std::vector<Matrix<T>> values() const;
  std::vector<Matrix<T>> p_values() const;   ///< P0 and P_i values only
  std::vector<Matrix<T>> q_values() const;
};

template <Scalar T>
ScreenComponents<T> extract_screen_components(const OlmosTensor<T>& r);

/// The expansion P0(Y1,Y2) + P_j(b1^j Y2 - b2^j Y1) + b1^i b2^j Q_ij for
/// xi_k = a_k^j v_j + Y_k + b_k^j w_j.
template <Scalar T>
Matrix<T> screen_expansion(const ScreenComponents<T>& comp, const Vector<T>& xi1,
                           const Vector<T>& xi2);

/// Screen block pr_E o R(xi1, xi2)|_E read directly from the tensor.
template <Scalar T>
Matrix<T> screen_block(const OlmosTensor<T>& r, const Vector<T>& xi1, const Vector<T>& xi2);

/// Whether span{Q_ij} lies inside span{P0 values, P_k values}.
template <Scalar T>
bool q_generated_by_p(const ScreenComponents<T>& comp, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Tensor spaces K(h) and B_h(h).

enum class TensorSpaceKind { Curvature, WeakCurvature };

template <Scalar T>
struct TensorSpaceBasis {
  TensorSpaceKind kind = TensorSpaceKind::Curvature;
  std::size_t space_dim = 0;             ///< dim E
  std::vector<Matrix<T>> algebra_basis;  ///< canonical basis of span(h)
  /// Coordinates as columns. For K: index ((a<b) pair, k); for B: (a, k).
  Matrix<T> coordinates;
  std::size_t dim() const { return coordinates.cols(); }

  /// K element as the table R(e_a, e_b) (q x q matrices, antisymmetric in a, b).
  std::vector<std::vector<Matrix<T>>> curvature_element(std::size_t i) const;
  /// B element as the list Q(e_a).
  std::vector<Matrix<T>> weak_element(std::size_t i) const;
};

/// Canonical echelon basis of the linear span of a set of square matrices.
template <Scalar T>
std::vector<Matrix<T>> span_basis(const std::vector<Matrix<T>>& mats, std::size_t n,
                                  Tolerance tol = {});

/// Whether m lies in span(basis).
template <Scalar T>
bool in_span(const Matrix<T>& m, const std::vector<Matrix<T>>& basis, Tolerance tol = {});

template <Scalar T>
TensorSpaceBasis<T> curvature_space(const std::vector<Matrix<T>>& h, std::size_t q,
                                    Tolerance tol = {});

/// `metric` is the Euclidean inner product h on E (identity when empty).
template <Scalar T>
TensorSpaceBasis<T> weak_curvature_space(const std::vector<Matrix<T>>& h, std::size_t q,
                                         const Matrix<T>& metric = {}, Tolerance tol = {});

struct WeakBergerResult {
  bool weak_berger = false;
  std::size_t achieved_dim = 0;  ///< dim span{Q(x)}
  std::size_t algebra_dim = 0;
};

/// Throws NotLieClosed if [h,h] is not contained in span(h).
template <Scalar T>
WeakBergerResult is_weak_berger(const std::vector<Matrix<T>>& h, std::size_t q,
                                const Matrix<T>& metric = {}, Tolerance tol = {});

}  // namespace normhol
