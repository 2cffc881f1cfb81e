#pragma once

#include <json.hpp>
#include <string>

#include "normhol/bbi.hpp"
#include "normhol/geometry.hpp"

/// JSON conversion of inputs and reports. Rationals serialize as "a/b";
/// matrices as row-major nested lists; subspaces as lists of basis columns.
namespace normhol::io {

using nlohmann::json;

/// Exact scalars accept "a/b" strings, decimal strings and integral numbers;
/// fractional JSON numbers are rejected with a diagnostic. Float scalars
/// accept numbers and rational strings.
template <Scalar T>
T scalar_from_json(const json& j);
template <Scalar T>
json scalar_to_json(const T& x);

template <Scalar T>
Vector<T> vector_from_json(const json& j);
template <Scalar T>
json vector_to_json(const Vector<T>& v);
template <Scalar T>
Matrix<T> matrix_from_json(const json& j);
template <Scalar T>
json matrix_to_json(const Matrix<T>& m);
template <Scalar T>
json matrices_to_json(const std::vector<Matrix<T>>& ms);
template <Scalar T>
json subspace_to_json(const Subspace<T>& s);

SignatureSpace signature_from_json(const json& j);
json signature_to_json(const SignatureSpace& s);

/// {"signature": {"p","q"}, "tangent_dim": n, "shape_operators": {label: matrix}};
/// omitted labels are zero operators.
template <Scalar T>
ShapeFamily<T> shape_family_from_json(const json& j, Tolerance tol = {});
template <Scalar T>
json shape_family_to_json(const ShapeFamily<T>& s);
template <Scalar T>
json tensor_to_json(const OlmosTensor<T>& r);

/// Gram from {"signature": {...}}, {"gram": matrix} or {"dim": n} (Euclidean).
template <Scalar T>
Matrix<T> gram_from_json(const json& j);
/// Gram as above plus "generators": list of matrices, Lie-closed.
template <Scalar T>
LieAlgebraSpan<T> algebra_from_json(const json& j, Tolerance tol = {});

template <Scalar T>
json splitting_to_json(const SplittingReport<T>& r);
template <Scalar T>
json bl_to_json(const BLResult<T>& r);
template <Scalar T>
json bbi_to_json(const BBIClassification<T>& c);
template <Scalar T>
json lorentzian_to_json(const LorentzianSplitting<T>& s);
template <Scalar T>
json holonomy_system_to_json(const HolonomySystemReport<T>& r);
json keylemma_to_json(const std::vector<KeyLemmaEntry>& entries);

/// Prefix expression: a number, a variable name "u<i>", or
/// [operator, arg, ...] with operator in + - * / pow sin cos exp sqrt.
geometry::Expr expr_from_json(const json& j);
/// {"family": ..., "params": {...}, "h": float}; custom immersions use
/// {"family": "custom", "parameter_dim": n, "expr": [component, ...]}.
geometry::Immersion immersion_from_json(const json& j);

json point_jet_to_json(const geometry::PointJet& pj);
json light_cone_to_json(const geometry::LightConeReport& r);
json parallel_pi_to_json(const geometry::ParallelPiReport& r);
json mean_curvature_to_json(const geometry::MeanCurvatureCase& c);

/// Parameter points: list of lists of numbers.
std::vector<std::vector<double>> points_from_json(const json& j);

/// Sorted-key JSON (two-space indent) or "key.path: value" lines; always ends
/// with a newline.
std::string render(const json& report, bool text);

}  // namespace normhol::io
