#pragma once

#include <optional>
#include <string>
#include <vector>

#include "normhol/holonomy.hpp"

namespace normhol {

enum class BBIType { Type1, Type2, Type3, Type4, Irreducible, NotWeaklyIrreducible };
std::string to_string(BBIType t);
BBIType parse_bbi_type(const std::string& s);

/// Null frame (v, screen basis, w) adapted to a null line: <v,w> = 1, v and w
/// null, screen = {v,w}^perp with gram `screen_gram`.
template <Scalar T>
struct AdaptedFrame {
  Matrix<T> frame;        ///< columns v, screen..., w
  Matrix<T> screen_gram;  ///< m x m, positive definite
  std::size_t m() const { return screen_gram.rows(); }
};

/// Frame adapted to span(v) for a null vector v of a Lorentzian gram.
template <Scalar T>
AdaptedFrame<T> adapted_frame(const Matrix<T>& gram, const Vector<T>& v, Tolerance tol = {});

template <Scalar T>
struct BBIClassification {
  BBIType type = BBIType::Irreducible;
  std::size_t m = 0;
  /// Screen algebra g as m x m matrices in the frame's screen basis.
  std::vector<Matrix<T>> g;
  /// Type 3: phi on the basis of g.
  std::vector<T> phi;
  /// Type 4: psi on the basis of g, coordinates in the basis of the complement
  /// of the free translations.
  std::vector<Vector<T>> psi;
  std::size_t ell = 0;
  std::optional<AdaptedFrame<T>> frame;
};

/// h acts on a Lorentzian space (gram of signature (1, m+1)). Throws
/// SignatureMismatch for other grams and UnrecognizedStructure when a weakly
/// irreducible algebra fits none of the four shapes.
template <Scalar T>
BBIClassification<T> classify_bbi(const LieAlgebraSpan<T>& h, Tolerance tol = {},
                                  std::uint64_t seed = kDefaultSeed);

/// Builds the representative algebra in so(1, m+1) on SignatureSpace(1, m).
/// For Type 4, `g` acts on R^ell and the screen is ordered (R^{m-ell}, R^ell).
/// phi / psi are values on span_basis(g). Throws InvalidEpimorphism.
template <Scalar T>
LieAlgebraSpan<T> construct_type(BBIType tag, const std::vector<Matrix<T>>& g, std::size_t m,
                                 const std::vector<T>& phi = {},
                                 const std::vector<Vector<T>>& psi = {}, std::size_t ell = 0,
                                 Tolerance tol = {});

template <Scalar T>
struct LorentzianSplitting {
  SplittingReport<T> report;
  Subspace<T> flat;                        ///< sum of trivially acted summands
  std::vector<Subspace<T>> riemannian;     ///< nontrivial positive definite factors
  std::vector<bool> riemannian_irreducible;
  std::vector<std::vector<HolonomySystemReport<T>>> riemannian_reports;  ///< per tensor
  std::optional<Subspace<T>> lorentzian;
  std::optional<BBIClassification<T>> lorentzian_class;
};

/// `tensors` (optional) feed holonomy_system_check on each Riemannian factor.
template <Scalar T>
LorentzianSplitting<T> lorentzian_splitting(const LieAlgebraSpan<T>& hol,
                                            const std::vector<OlmosTensor<T>>& tensors = {},
                                            Tolerance tol = {},
                                            std::uint64_t seed = kDefaultSeed);

}  // namespace normhol
