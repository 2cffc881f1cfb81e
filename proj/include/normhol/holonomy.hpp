#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normhol/curvature.hpp"

namespace normhol {

inline constexpr std::uint64_t kDefaultSeed = 0xB10C;

/// Bracket-closed span of skew operators on a space with the given gram.
template <Scalar T>
struct LieAlgebraSpan {
  Matrix<T> gram;
  std::vector<Matrix<T>> generators;
  std::vector<Matrix<T>> basis;  ///< canonical echelon basis

  std::size_t dim() const { return basis.size(); }
  std::size_t space_dim() const { return gram.rows(); }
};

/// Smallest bracket-closed span containing the generators. Throws
/// InternalError if saturation does not stabilize within dim so(n) rounds.
template <Scalar T>
LieAlgebraSpan<T> lie_closure(const std::vector<Matrix<T>>& generators, const Matrix<T>& gram,
                              Tolerance tol = {});

/// Span of the curvature operators of every tensor, bracket-closed.
template <Scalar T>
LieAlgebraSpan<T> generate_holonomy(const std::vector<OlmosTensor<T>>& tensors,
                                    const SignatureSpace& space, Tolerance tol = {});

/// Operators C with C X = X C for all X and gram C = C^T gram.
template <Scalar T>
std::vector<Matrix<T>> self_adjoint_commutant(const std::vector<Matrix<T>>& ops,
                                              const Matrix<T>& gram, Tolerance tol = {});

enum class Reducibility { Irreducible, WeaklyIrreducible, Decomposable };
std::string to_string(Reducibility r);

template <Scalar T>
struct SplittingReport {
  Reducibility classification = Reducibility::Irreducible;
  /// Decomposable: a proper nondegenerate invariant subspace, when one could be
  /// extracted exactly.
  std::optional<Subspace<T>> witness;
  /// Decomposable but the splitting field is irrational: the commutant element
  /// certifying it.
  std::optional<Matrix<T>> certificate;
  /// Best-effort invariant isotropic subspace (never claimed maximal).
  std::optional<Subspace<T>> isotropic;
  /// Common kernel of the algebra.
  Subspace<T> flat_part;
  /// Nondegenerate invariant summands, pairwise orthogonal and indecomposable
  /// as far as exact witnesses reach. Always sums to the whole space.
  std::vector<Subspace<T>> summands;
  std::size_t commutant_dim = 0;
};

/// `seed` drives the random commutant combination used when no single basis
/// element separates the space.
template <Scalar T>
SplittingReport<T> invariant_subspace_analysis(const LieAlgebraSpan<T>& h, Tolerance tol = {},
                                               std::uint64_t seed = kDefaultSeed);

/// One step of the commutant splitting: a proper nondegenerate invariant
/// subspace, if the self-adjoint commutant exposes one with rational data.
template <Scalar T>
struct CommutantSplit {
  bool decomposable = false;
  std::optional<Subspace<T>> first;
  std::optional<Subspace<T>> second;
  std::optional<Matrix<T>> element;
  std::size_t commutant_dim = 0;
};

template <Scalar T>
CommutantSplit<T> commutant_split(const std::vector<Matrix<T>>& ops, const Matrix<T>& gram,
                                  Tolerance tol = {}, std::uint64_t seed = kDefaultSeed);

/// Best-effort search for a nonzero invariant isotropic subspace.
template <Scalar T>
std::optional<Subspace<T>> find_invariant_isotropic(const std::vector<Matrix<T>>& ops,
                                                    const Matrix<T>& gram, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Euclidean screen analysis.

template <Scalar T>
struct ScreenDecomposition {
  Subspace<T> trivial_module;               ///< E_0
  std::vector<Subspace<T>> modules;         ///< E_1..E_l
  std::vector<LieAlgebraSpan<T>> ideals;    ///< g_1..g_l, acting on the whole screen
  std::vector<bool> ideal_irreducible;      ///< g_j irreducible on E_j
};

template <Scalar T>
struct NoBLWitness {
  Matrix<T> element;                   ///< element of g outside the sum of the g_j
  std::vector<std::size_t> modules;    ///< indices into `all_modules` it acts on
  std::vector<Subspace<T>> all_modules;
  std::string reason;
};

template <Scalar T>
struct BLResult {
  std::optional<ScreenDecomposition<T>> decomposition;
  std::optional<NoBLWitness<T>> witness;
  bool holds() const { return decomposition.has_value(); }
};

/// g must act on a Euclidean space (positive definite gram).
template <Scalar T>
BLResult<T> borel_lichnerowicz(const LieAlgebraSpan<T>& g, Tolerance tol = {},
                               std::uint64_t seed = kDefaultSeed);

/// Covariant curvature table r(a,b,c,d) = <R(b_a,b_b) b_c, b_d> on a space with
/// an arbitrary positive definite gram (no orthonormal basis is assumed).
template <Scalar T>
struct CurvatureTable {
  Matrix<T> gram;
  std::vector<T> values;

  std::size_t dim() const { return gram.rows(); }
  const T& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    const std::size_t n = dim();
    return values[((a * n + b) * n + c) * n + d];
  }
  T& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    const std::size_t n = dim();
    return values[((a * n + b) * n + c) * n + d];
  }
  Matrix<T> operator_at(std::size_t a, std::size_t b) const;
  bool is_zero(Tolerance tol = {}) const;
};

/// Restriction of r to the subspace spanned by `basis` (columns in the fiber).
template <Scalar T>
CurvatureTable<T> restrict_tensor(const OlmosTensor<T>& r, const Matrix<T>& basis);

/// sum (S^-1)_{ad} (S^-1)_{bc} r(a,b,c,d); equals the double sum over an
/// orthonormal frame.
template <Scalar T>
T screen_scalar_curvature(const CurvatureTable<T>& r);

template <Scalar T>
struct HolonomySystemReport {
  std::size_t module_dim = 0;
  bool irreducible = false;
  bool nonzero = false;
  T scal{};
  bool symmetric_flag = false;
};

/// `g` must act on the same space as `r` (gram equal to r.gram). Throws
/// TensorNotInAlgebra when some R(x,y) lies outside span(g).
template <Scalar T>
HolonomySystemReport<T> holonomy_system_check(const CurvatureTable<T>& r,
                                              const LieAlgebraSpan<T>& g, Tolerance tol = {});

struct KeyLemmaEntry {
  std::size_t dim_k = 0;
  bool nonzero = false;
};

/// dim K(g_j) of each ideal restricted to its module.
template <Scalar T>
std::vector<KeyLemmaEntry> keylemma_check(const ScreenDecomposition<T>& d, Tolerance tol = {});

/// Operators of g restricted to the invariant subspace u, in u's basis.
template <Scalar T>
LieAlgebraSpan<T> restrict_algebra(const LieAlgebraSpan<T>& g, const Subspace<T>& u,
                                   Tolerance tol = {});

}  // namespace normhol
