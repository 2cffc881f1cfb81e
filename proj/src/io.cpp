#include "normhol/io.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace normhol::io {

// ---------------------------------------------------------------------------
// Scalars and arrays

template <Scalar T>
T scalar_from_json(const json& j) {
  if constexpr (std::same_as<T, Rational>) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) {
      const double x = j.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15)
        return Rational(static_cast<long>(x));
      throw InvalidInput("exact mode does not accept the float literal " + j.dump() +
                         "; write it as a rational string such as \"1/2\" or use --mode float");
    }
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  }
  throw InvalidInput("expected a scalar, got " + j.dump());
}

template <Scalar T>
json scalar_to_json(const T& x) {
  if constexpr (std::same_as<T, Rational>) {
    if (x.get_den() == 1 && x.get_num().fits_slong_p()) return x.get_num().get_si();
    return to_fraction_string(x);
  } else {
    return x;
  }
}

template <Scalar T>
Vector<T> vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected a list of scalars");
  Vector<T> v;
  for (const auto& x : j) v.push_back(scalar_from_json<T>(x));
  return v;
}

template <Scalar T>
json vector_to_json(const Vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <Scalar T>
Matrix<T> matrix_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected a matrix as a list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw DimensionMismatch("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json<T>(j[r][c]);
  }
  return m;
}

template <Scalar T>
json matrix_to_json(const Matrix<T>& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(vector_to_json<T>(m.row(r)));
  return out;
}

template <Scalar T>
json matrices_to_json(const std::vector<Matrix<T>>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

template <Scalar T>
json subspace_to_json(const Subspace<T>& s) {
  json basis = json::array();
  for (std::size_t c = 0; c < s.dim(); ++c) basis.push_back(vector_to_json<T>(s.basis().col(c)));
  return {{"dim", s.dim()}, {"ambient_dim", s.ambient_dim()}, {"basis", basis}};
}

SignatureSpace signature_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("q"))
    throw InvalidInput("signature must be {\"p\": int, \"q\": int}");
  const long p = j.at("p").get<long>(), q = j.at("q").get<long>();
  if (p < 0 || q < 0) throw InvalidInput("signature entries must be non-negative");
  return SignatureSpace(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
}

json signature_to_json(const SignatureSpace& s) { return {{"p", s.p()}, {"q", s.q()}}; }

template <Scalar T>
ShapeFamily<T> shape_family_from_json(const json& j, Tolerance tol) {
  ShapeFamily<T> s;
  s.space = signature_from_json(j.at("signature"));
  s.tangent_dim = j.at("tangent_dim").get<std::size_t>();
  s.operators.assign(s.space.dim(), Matrix<T>(s.tangent_dim, s.tangent_dim));
  if (j.contains("shape_operators")) {
    for (const auto& [label, value] : j.at("shape_operators").items())
      s.operators[s.space.index_of(label)] = matrix_from_json<T>(value);
  }
  s.validate(tol);
  return s;
}

template <Scalar T>
json shape_family_to_json(const ShapeFamily<T>& s) {
  json ops = json::object();
  for (std::size_t i = 0; i < s.operators.size(); ++i)
    ops[s.space.label(i)] = matrix_to_json(s.operators[i]);
  return {{"signature", signature_to_json(s.space)},
          {"tangent_dim", s.tangent_dim},
          {"shape_operators", ops}};
}

template <Scalar T>
json tensor_to_json(const OlmosTensor<T>& r) {
  const std::size_t n = r.dim();
  json values = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    json va = json::array();
    for (std::size_t b = 0; b < n; ++b) {
      json vb = json::array();
      for (std::size_t c = 0; c < n; ++c) {
        json vc = json::array();
        for (std::size_t d = 0; d < n; ++d) vc.push_back(scalar_to_json(r.at(a, b, c, d)));
        vb.push_back(vc);
      }
      va.push_back(vb);
    }
    values.push_back(va);
  }
  return {{"signature", signature_to_json(r.space())}, {"values", values}};
}

template <Scalar T>
Matrix<T> gram_from_json(const json& j) {
  if (j.contains("signature")) return signature_from_json(j.at("signature")).template gram<T>();
  if (j.contains("gram")) {
    auto g = matrix_from_json<T>(j.at("gram"));
    if (!g.square() || !(g == g.transpose())) throw InvalidInput("gram must be symmetric");
    return g;
  }
  if (j.contains("dim")) return Matrix<T>::identity(j.at("dim").get<std::size_t>());
  throw InvalidInput("algebra input needs \"signature\", \"gram\" or \"dim\"");
}

template <Scalar T>
LieAlgebraSpan<T> algebra_from_json(const json& j, Tolerance tol) {
  const Matrix<T> gram = gram_from_json<T>(j);
  std::vector<Matrix<T>> gens;
  for (const auto& g : j.at("generators")) {
    auto m = matrix_from_json<T>(g);
    if (m.rows() != gram.rows() || m.cols() != gram.cols())
      throw DimensionMismatch("generator size does not match the gram");
    if (!is_metric_skew(m, gram, tol)) throw InvalidInput("generator is not skew for the gram");
    gens.push_back(std::move(m));
  }
  return lie_closure(gens, gram, tol);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

template <Scalar T>
json optional_subspace(const std::optional<Subspace<T>>& s) {
  return s ? subspace_to_json(*s) : json(nullptr);
}

template <Scalar T>
json subspaces(const std::vector<Subspace<T>>& ss) {
  json out = json::array();
  for (const auto& s : ss) out.push_back(subspace_to_json(s));
  return out;
}

}  // namespace

template <Scalar T>
json splitting_to_json(const SplittingReport<T>& r) {
  return {{"classification", to_string(r.classification)},
          {"witness", optional_subspace(r.witness)},
          {"certificate", r.certificate ? matrix_to_json(*r.certificate) : json(nullptr)},
          {"isotropic", optional_subspace(r.isotropic)},
          {"flat_part", subspace_to_json(r.flat_part)},
          {"summands", subspaces(r.summands)},
          {"commutant_dim", r.commutant_dim}};
}

template <Scalar T>
json bl_to_json(const BLResult<T>& r) {
  json out{{"holds", r.holds()}};
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    json ideals = json::array();
    for (const auto& g : d.ideals)
      ideals.push_back({{"dim", g.dim()}, {"basis", matrices_to_json(g.basis)}});
    out["trivial_module"] = subspace_to_json(d.trivial_module);
    out["modules"] = subspaces(d.modules);
    out["ideals"] = ideals;
    out["ideal_irreducible"] = d.ideal_irreducible;
    out["witness"] = nullptr;
  } else {
    const auto& w = *r.witness;
    out["modules"] = subspaces(w.all_modules);
    out["ideals"] = json::array();
    out["witness"] = {{"element", matrix_to_json(w.element)},
                      {"modules", w.modules},
                      {"reason", w.reason}};
  }
  return out;
}

template <Scalar T>
json bbi_to_json(const BBIClassification<T>& c) {
  json psi = json::array();
  for (const auto& p : c.psi) psi.push_back(vector_to_json(p));
  json out{{"type", to_string(c.type)},
           {"m", c.m},
           {"screen_algebra_dim", c.g.size()},
           {"screen_algebra", matrices_to_json(c.g)},
           {"phi", vector_to_json(c.phi)},
           {"psi", psi},
           {"ell", c.ell}};
  out["frame"] = c.frame ? matrix_to_json(c.frame->frame) : json(nullptr);
  return out;
}

template <Scalar T>
json holonomy_system_to_json(const HolonomySystemReport<T>& r) {
  return {{"module_dim", r.module_dim},
          {"irreducible", r.irreducible},
          {"nonzero", r.nonzero},
          {"scal", scalar_to_json(r.scal)},
          {"symmetric_flag", r.symmetric_flag}};
}

template <Scalar T>
json lorentzian_to_json(const LorentzianSplitting<T>& s) {
  json reports = json::array();
  for (const auto& per_factor : s.riemannian_reports) {
    json f = json::array();
    for (const auto& r : per_factor) f.push_back(holonomy_system_to_json(r));
    reports.push_back(f);
  }
  return {{"report", splitting_to_json(s.report)},
          {"flat", subspace_to_json(s.flat)},
          {"riemannian", subspaces(s.riemannian)},
          {"riemannian_irreducible", s.riemannian_irreducible},
          {"riemannian_reports", reports},
          {"lorentzian", optional_subspace(s.lorentzian)},
          {"lorentzian_class",
           s.lorentzian_class ? bbi_to_json(*s.lorentzian_class) : json(nullptr)}};
}

json keylemma_to_json(const std::vector<KeyLemmaEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) out.push_back({{"dim_K", e.dim_k}, {"nonzero", e.nonzero}});
  return out;
}

// ---------------------------------------------------------------------------
// Geometry inputs

geometry::Expr expr_from_json(const json& j) {
  using geometry::Expr;
  Expr e;
  if (j.is_number()) {
    e.kind = Expr::Kind::Constant;
    e.constant = j.get<double>();
    return e;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.size() < 2 || s[0] != 'u' || s.find_first_not_of("0123456789", 1) != std::string::npos)
      throw InvalidInput("unknown variable '" + s + "' (expected u0, u1, ...)");
    e.kind = Expr::Kind::Variable;
    e.variable = std::stoul(s.substr(1));
    return e;
  }
  if (j.is_array() && !j.empty() && j[0].is_string()) {
    e.kind = Expr::Kind::Op;
    e.op = j[0].get<std::string>();
    for (std::size_t i = 1; i < j.size(); ++i) e.args.push_back(expr_from_json(j[i]));
    return e;
  }
  throw InvalidInput("malformed expression " + j.dump());
}

namespace {

std::size_t max_variable(const geometry::Expr& e) {
  using geometry::Expr;
  if (e.kind == Expr::Kind::Variable) return e.variable + 1;
  std::size_t m = 0;
  for (const auto& a : e.args) m = std::max(m, max_variable(a));
  return m;
}

void check_keys(const json& params, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : params.items())
    if (!ok.contains(key)) throw InvalidInput("unknown parameter '" + key + "'");
}

template <typename V>
V get_or(const json& j, const char* key, V fallback) {
  return j.contains(key) ? j.at(key).get<V>() : fallback;
}

}  // namespace

geometry::Immersion immersion_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw InvalidInput("immersion needs a \"family\"");
  const auto family = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  geometry::Immersion imm;
  try {
    if (family == "affine") {
      check_keys(params, {"origin", "directions"});
      imm = geometry::affine(params.at("origin").get<std::vector<double>>(),
                             params.at("directions").get<std::vector<std::vector<double>>>());
    } else if (family == "sphere") {
      check_keys(params, {"radius", "dim", "ambient"});
      const auto dim = get_or<std::size_t>(params, "dim", 2);
      imm = geometry::sphere(get_or<double>(params, "radius", 1.0), dim,
                             get_or<std::size_t>(params, "ambient", dim + 1));
    } else if (family == "product_spheres") {
      check_keys(params, {"radii", "dims", "ambient"});
      const auto dims = params.at("dims").get<std::vector<std::size_t>>();
      std::size_t need = 0;
      for (auto d : dims) need += d + 1;
      imm = geometry::product_spheres(params.at("radii").get<std::vector<double>>(), dims,
                                      get_or<std::size_t>(params, "ambient", need));
    } else if (family == "light_cone_section") {
      check_keys(params, {"dim", "c", "a", "codim3", "rho", "warp"});
      imm = geometry::light_cone_section(
          get_or<std::size_t>(params, "dim", 2), get_or<double>(params, "c", 1.0),
          get_or<std::vector<double>>(params, "a", {}), get_or<bool>(params, "codim3", false),
          get_or<double>(params, "rho", 0.0), get_or<double>(params, "warp", 0.0));
    } else if (family == "hyperbolic") {
      check_keys(params, {"dim", "radius", "ambient"});
      const auto dim = get_or<std::size_t>(params, "dim", 2);
      imm = geometry::hyperbolic(dim, get_or<double>(params, "radius", 1.0),
                                 get_or<std::size_t>(params, "ambient", dim + 2));
    } else if (family == "custom") {
      if (!j.contains("expr") || !j.at("expr").is_array())
        throw InvalidInput("custom immersion needs \"expr\": [component, ...]");
      std::vector<geometry::Expr> comps;
      std::size_t pdim = 0;
      for (const auto& c : j.at("expr")) {
        comps.push_back(expr_from_json(c));
        pdim = std::max(pdim, max_variable(comps.back()));
      }
      pdim = get_or<std::size_t>(j, "parameter_dim", pdim);
      imm = geometry::custom(std::move(comps), pdim);
    } else {
      throw InvalidInput("unknown immersion family '" + family + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad immersion parameters: ") + e.what());
  }
  if (j.contains("h")) {
    const double h = j.at("h").get<double>();
    if (!(h > 0.0)) throw InvalidInput("h must be positive");
    imm.h = h;
  }
  return imm;
}

std::vector<std::vector<double>> points_from_json(const json& j) {
  try {
    return j.get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    throw InvalidInput("expected a list of parameter points");
  }
}

json point_jet_to_json(const geometry::PointJet& pj) {
  json pi = json::array();
  for (const auto& v : pj.pi) pi.push_back(v);
  return {{"u", pj.u},
          {"point", pj.point},
          {"signature", signature_to_json(pj.space)},
          {"induced_metric", matrix_to_json(pj.induced_metric)},
          {"tangent_frame", matrix_to_json(pj.tangent_frame)},
          {"normal_frame", matrix_to_json(pj.normal_frame)},
          {"second_fundamental_form", pi},
          {"mean_curvature", pj.mean_curvature},
          {"shape_family", shape_family_to_json(pj.shapes)}};
}

json light_cone_to_json(const geometry::LightConeReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"u", s.u},
                       {"vv", s.vv},
                       {"on_cone", s.on_cone},
                       {"v_normal", s.v_normal},
                       {"shape_residual", std::isfinite(s.shape_residual)
                                              ? json(s.shape_residual)
                                              : json(nullptr)}});
  return {{"all_on_cone", r.all_on_cone},
          {"samples", samples},
          {"loop_residuals", r.loop_residuals}};
}

json parallel_pi_to_json(const geometry::ParallelPiReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"u", s.u},
                       {"residual", s.residual},
                       {"eigenvalues", s.eigenvalues},
                       {"distinct", s.distinct}});
  return {{"parallel", r.parallel},
          {"constant_spectrum", r.constant_spectrum},
          {"eigenvalues", r.eigenvalues},
          {"spectrum_spread", r.spectrum_spread},
          {"samples", samples}};
}

json mean_curvature_to_json(const geometry::MeanCurvatureCase& c) {
  return {{"class", geometry::to_string(c.h_class)},
          {"hh", c.hh},
          {"a_h_norm", c.a_h_norm},
          {"contradiction", c.contradiction},
          {"reason", c.reason}};
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string render(const json& report, bool text) {
  if (!text) return report.dump(2) + "\n";
  std::ostringstream out;
  flatten(report, "", out);
  return out.str();
}

// ---------------------------------------------------------------------------

#define NORMHOL_INSTANTIATE(T)                                                 \
  template T scalar_from_json<T>(const json&);                                 \
  template json scalar_to_json<T>(const T&);                                   \
  template Vector<T> vector_from_json<T>(const json&);                         \
  template json vector_to_json<T>(const Vector<T>&);                           \
  template Matrix<T> matrix_from_json<T>(const json&);                         \
  template json matrix_to_json<T>(const Matrix<T>&);                           \
  template json matrices_to_json<T>(const std::vector<Matrix<T>>&);            \
  template json subspace_to_json<T>(const Subspace<T>&);                       \
  template ShapeFamily<T> shape_family_from_json<T>(const json&, Tolerance);   \
  template json shape_family_to_json<T>(const ShapeFamily<T>&);                \
  template json tensor_to_json<T>(const OlmosTensor<T>&);                      \
  template Matrix<T> gram_from_json<T>(const json&);                           \
  template LieAlgebraSpan<T> algebra_from_json<T>(const json&, Tolerance);     \
  template json splitting_to_json<T>(const SplittingReport<T>&);               \
  template json bl_to_json<T>(const BLResult<T>&);                             \
  template json bbi_to_json<T>(const BBIClassification<T>&);                   \
  template json lorentzian_to_json<T>(const LorentzianSplitting<T>&);          \
  template json holonomy_system_to_json<T>(const HolonomySystemReport<T>&);

NORMHOL_INSTANTIATE(Rational)
NORMHOL_INSTANTIATE(double)

#undef NORMHOL_INSTANTIATE

}  // namespace normhol::io
