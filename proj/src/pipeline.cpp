#include "normhol/pipeline.hpp"

#include <cmath>

namespace normhol {

using nlohmann::json;

std::optional<std::vector<OlmosTensor<Rational>>> rationalize_tensors(
    const std::vector<OlmosTensor<double>>& tensors, double tol) {
  constexpr std::int64_t kMaxDenominator = 1000000;
  std::vector<OlmosTensor<Rational>> out;
  for (const auto& t : tensors) {
    OlmosTensor<Rational> r(t.space());
    const std::size_t n = t.dim();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            const double x = t.at(a, b, c, d);
            const Rational q = rationalize(x, tol, kMaxDenominator);
            if (std::fabs(q.get_d() - x) > tol) return std::nullopt;
            r.at(a, b, c, d) = q;
          }
    if (!check_curvature_identities(r).all()) return std::nullopt;
    for (const auto& op : r.curvature_operators())
      if (!is_metric_skew(op, r.space())) return std::nullopt;
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

template <Scalar T>
Matrix<T> screen_columns(const AdaptedFrame<T>& f) {
  return f.frame.block(0, 1, f.frame.rows(), f.m());
}

/// BL, key lemma and holonomy-system checks on the screen of a weakly
/// irreducible Lorentzian factor.
template <Scalar T>
json screen_analysis(const LorentzianSplitting<T>& split, const std::vector<OlmosTensor<T>>& tensors,
                     Tolerance tol, std::uint64_t seed) {
  if (!split.lorentzian || !split.lorentzian_class || !split.lorentzian_class->frame)
    return nullptr;
  const auto& cls = *split.lorentzian_class;
  const auto& frame = *cls.frame;
  json out{{"type", to_string(cls.type)}, {"m", cls.m}};
  if (cls.g.empty()) {
    out["screen_algebra_dim"] = 0;
    out["bl"] = nullptr;
    return out;
  }
  const auto g = lie_closure(cls.g, frame.screen_gram, tol);
  out["screen_algebra_dim"] = g.dim();
  const auto bl = borel_lichnerowicz(g, tol, seed);
  out["bl"] = io::bl_to_json(bl);
  if (!bl.holds()) return out;
  const auto& dec = *bl.decomposition;
  out["keylemma"] = io::keylemma_to_json(keylemma_check(dec, tol));
  // Module bases in fiber coordinates: U basis * screen columns * module basis.
  const Matrix<T> to_fiber = split.lorentzian->basis() * screen_columns(frame);
  json systems = json::array();
  for (std::size_t j = 0; j < dec.modules.size(); ++j) {
    const auto gj = restrict_algebra(dec.ideals[j], dec.modules[j], tol);
    const Matrix<T> basis = to_fiber * dec.modules[j].basis();
    json per_tensor = json::array();
    for (const auto& r : tensors) {
      const auto table = restrict_tensor(r, basis);
      try {
        per_tensor.push_back(io::holonomy_system_to_json(holonomy_system_check(table, gj, tol)));
      } catch (const TensorNotInAlgebra& e) {
        per_tensor.push_back({{"error", e.what()}});
      }
    }
    systems.push_back(per_tensor);
  }
  out["holonomy_systems"] = systems;
  return out;
}

template <Scalar T>
json analyse(const std::vector<OlmosTensor<T>>& tensors, const SignatureSpace& space,
             bool light_cone, Tolerance tol, std::uint64_t seed) {
  const auto hol = generate_holonomy(tensors, space, tol);
  json out;
  out["holonomy"] = {{"dim", hol.dim()},
                     {"basis", io::matrices_to_json(hol.basis)},
                     {"trivial", hol.dim() == 0},
                     {"lower_bound", true}};
  const auto analysis = invariant_subspace_analysis(hol, tol, seed);
  out["analysis"] = io::splitting_to_json(analysis);
  const auto split = lorentzian_splitting(hol, tensors, tol, seed);
  out["splitting"] = io::lorentzian_to_json(split);
  out["screen"] = screen_analysis(split, tensors, tol, seed);
  if (light_cone) {
    const auto gram = space.gram<T>();
    const auto v = space.basis_vector<T>(space.v_index(0));
    bool killed = true;
    for (const auto& x : hol.basis) {
      const auto xv = x * v;
      for (const auto& c : xv) killed = killed && ScalarTraits<T>::is_zero(c, x.max_abs(), tol);
    }
    std::optional<Subspace<T>> xi = analysis.isotropic;
    std::string source = "isotropic search";
    if ((!xi || !xi->contains(v, tol)) && killed) {
      xi = Subspace<T>(Matrix<T>::column(v), space.dim(), tol);
      source = "parallel position normal";
    }
    out["light_cone_normal"] = {
        {"v", io::vector_to_json(v)},
        {"v_parallel", killed},
        {"xi_found", xi ? io::subspace_to_json(*xi) : json(nullptr)},
        {"xi_source", xi ? json(source) : json(nullptr)},
        {"xi_contains_v", xi.has_value() && xi->contains(v, tol)}};
  }
  return out;
}

std::vector<double> image(const geometry::Immersion& imm, const std::vector<double>& u) {
  return imm.evaluate(u);
}

bool same_image(const geometry::Immersion& imm, const std::vector<double>& a,
                const std::vector<double>& b) {
  const auto x = image(imm, a), y = image(imm, b);
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += (x[i] - y[i]) * (x[i] - y[i]);
    s += x[i] * x[i];
  }
  return std::sqrt(d) <= 1e-12 * std::max(1.0, std::sqrt(s));
}

OlmosTensor<double> conjugate_checked(const OlmosTensor<double>& r,
                                      const geometry::TransportResult& t, std::size_t steps) {
  try {
    return conjugate_tensor(r, t.tau, Tolerance{1e-6});
  } catch (const NonOrthogonalTransport&) {
    throw InvalidInput("transport is not orthogonal to 1e-6 (residual " +
                       std::to_string(t.residual) + " with " + std::to_string(steps) +
                       " steps); increase \"steps\"");
  }
}

}  // namespace

json run_pipeline(const geometry::Immersion& imm, const PipelineConfig& config) {
  if (config.samples.empty() && !config.base) throw InvalidInput("pipeline needs samples");
  if (config.steps < 8) throw InvalidInput("steps must be at least 8");
  const std::vector<double> base = config.base.value_or(config.samples.front());
  const auto jet_p = geometry::point_jet(imm, base, config.method);
  const SignatureSpace space = jet_p.space;

  std::vector<OlmosTensor<double>> tensors{olmos_tensor(jet_p.shapes)};
  json transports = json::array();
  for (const auto& q : config.samples) {
    if (q == base) continue;
    const auto t = geometry::transport_path(imm, {base, q}, config.steps);
    const auto jet_q = geometry::point_jet(imm, q, config.method);
    if (!(jet_q.space == space)) throw InvalidInput("normal signature changes between samples");
    tensors.push_back(conjugate_checked(olmos_tensor(jet_q.shapes), t, config.steps));
    transports.push_back(
        {{"kind", "path"}, {"to", q}, {"steps", t.steps}, {"residual", t.residual}});
  }
  for (const auto& loop : config.loops) {
    if (loop.size() < 2) throw InvalidInput("loops need at least two vertices");
    std::vector<std::vector<double>> poly{base};
    poly.insert(poly.end(), loop.begin(), loop.end());
    if (!same_image(imm, loop.front(), loop.back())) poly.push_back(loop.front());
    poly.push_back(base);
    const auto t = geometry::transport_path(imm, poly, config.steps);
    tensors.push_back(conjugate_checked(tensors.front(), t, config.steps));
    transports.push_back({{"kind", "loop"},
                          {"vertices", loop.size()},
                          {"steps", t.steps},
                          {"residual", t.residual},
                          {"tau", io::matrix_to_json(t.tau)}});
  }

  // With denominators up to 1e6 nearly any double has a close convergent, so
  // the exact data must also reproduce the float holonomy dimension.
  std::optional<std::vector<OlmosTensor<Rational>>> exact;
  if (config.mode != ScalarMode::Float) {
    exact = rationalize_tensors(tensors, config.tol);
    if (exact) {
      const auto float_dim = generate_holonomy(tensors, space, Tolerance{config.rank_tol}).dim();
      if (generate_holonomy(*exact, space).dim() != float_dim) exact.reset();
    }
  }
  if (config.mode == ScalarMode::Exact && !exact)
    throw InvalidInput(
        "exact mode: curvature data does not rationalize consistently (denominators <= 1e6, "
        "same holonomy dimension as float mode); rerun with --mode float");

  json report;
  if (exact) {
    report = analyse(*exact, space, imm.light_cone, Tolerance{}, config.seed);
    report["mode"] = "exact";
    mpz_class max_den = 1;
    for (const auto& t : *exact)
      for (const auto& op : t.curvature_operators())
        for (const auto& x : op.flat())
          if (x.get_den() > max_den) max_den = x.get_den();
    report["max_denominator"] = max_den.get_str();
  } else {
    report = analyse(tensors, space, imm.light_cone, Tolerance{config.rank_tol}, config.seed);
    report["mode"] = "float";
  }
  report["family"] = imm.family;
  report["signature"] = io::signature_to_json(space);
  report["base"] = base;
  report["tensor_count"] = tensors.size();
  report["transports"] = transports;
  report["mean_curvature"] =
      io::mean_curvature_to_json(geometry::mean_curvature_case(jet_p, config.inject_mean_curvature));
  if (imm.light_cone) {
    std::vector<std::vector<double>> pts{base};
    for (const auto& q : config.samples)
      if (q != base) pts.push_back(q);
    report["light_cone"] = io::light_cone_to_json(
        geometry::light_cone_check(imm, pts, config.loops, config.steps, false, config.method));
  }
  return report;
}

}  // namespace normhol
