#include "normhol/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <ostream>

#include "normhol/pipeline.hpp"

namespace normhol::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string mode;  // empty: subcommand default
  double tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
  std::string report = "json";
};

json read_input(const std::string& path) {
  if (path.empty()) throw InvalidInput("missing --input");
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open input file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

template <Scalar T>
std::pair<std::size_t, std::size_t> inertia(const Matrix<T>& gram) {
  const auto d = to_double_matrix(gram);
  Eigen::MatrixXd e(d.rows(), d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) e(r, c) = d(r, c);
  if (e.rows() == 0) return {0, 0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
  std::size_t neg = 0, pos = 0;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    if (es.eigenvalues()[i] < -1e-12) ++neg;
    if (es.eigenvalues()[i] > 1e-12) ++pos;
  }
  return {neg, pos};
}

template <Scalar T>
std::vector<Matrix<T>> matrices_from(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected a list of matrices");
  std::vector<Matrix<T>> out;
  for (const auto& m : j) out.push_back(io::matrix_from_json<T>(m));
  return out;
}

/// Square generators of a common size q, Lie-closed in gl(q).
template <Scalar T>
std::pair<std::vector<Matrix<T>>, std::size_t> screen_generators(const json& in, Tolerance tol) {
  const auto gens = matrices_from<T>(in.at("generators"));
  std::size_t q = in.value("q", std::size_t{0});
  for (const auto& g : gens) {
    if (!g.square()) throw DimensionMismatch("generators must be square");
    if (q == 0) q = g.rows();
    if (g.rows() != q) throw DimensionMismatch("generators differ in size");
  }
  if (q == 0) throw InvalidInput("cannot infer q from an empty generator list; pass \"q\"");
  return {span_basis(gens, q, tol), q};
}

// ---------------------------------------------------------------------------

template <Scalar T>
json cmd_curvature(const json& in, Tolerance tol) {
  const auto shapes = io::shape_family_from_json<T>(in, tol);
  auto r = olmos_tensor(shapes);
  const auto ids = check_curvature_identities(r, tol);
  json ops = json::array();
  const std::size_t n = r.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto op = r.operator_at(a, b);
      if (op.is_zero(tol)) continue;
      ops.push_back({{"pair", {shapes.space.label(a), shapes.space.label(b)}},
                     {"operator", io::matrix_to_json(op)}});
    }
  json out{{"signature", io::signature_to_json(shapes.space)},
           {"identities",
            {{"antisymmetric", ids.antisymmetric},
             {"skew_adjoint", ids.skew_adjoint},
             {"pair_symmetric", ids.pair_symmetric},
             {"first_bianchi", ids.first_bianchi},
             {"all", ids.all()}}},
           {"trace_formula", satisfies_trace_formula(r, shapes, tol)},
           {"tensor", io::tensor_to_json(r)},
           {"curvature_operators", ops},
           {"zero", r.is_zero(tol)}};
  if (in.contains("transport")) {
    const auto tau = io::matrix_from_json<T>(in.at("transport"));
    out["conjugated"] = io::tensor_to_json(conjugate_tensor(r, tau, tol));
  }
  return out;
}

template <Scalar T>
json cmd_screen(const json& in, Tolerance tol) {
  std::vector<json> families;
  if (in.contains("families")) {
    for (const auto& f : in.at("families")) families.push_back(f);
  } else {
    families.push_back(in);
  }
  std::vector<OlmosTensor<T>> tensors;
  for (const auto& f : families) {
    const auto shapes = io::shape_family_from_json<T>(f, tol);
    auto r = olmos_tensor(shapes);
    if (f.contains("transport"))
      r = conjugate_tensor(r, io::matrix_from_json<T>(f.at("transport")), tol);
    if (!tensors.empty() && !(r.space() == tensors.front().space()))
      throw DimensionMismatch("families have different signatures");
    tensors.push_back(std::move(r));
  }
  const SignatureSpace space = tensors.front().space();
  json per_tensor = json::array();
  bool all_generated = true, expansion_ok = true;
  for (const auto& r : tensors) {
    const auto comp = extract_screen_components(r);
    json p0 = json::array(), p = json::array(), q = json::array();
    for (const auto& row : comp.p0) p0.push_back(io::matrices_to_json(row));
    for (const auto& row : comp.p) p.push_back(io::matrices_to_json(row));
    for (const auto& row : comp.q) q.push_back(io::matrices_to_json(row));
    const bool generated = q_generated_by_p(comp, tol);
    all_generated = all_generated && generated;
    for (std::size_t a = 0; a < space.dim(); ++a)
      for (std::size_t b = 0; b < space.dim(); ++b) {
        const auto x = space.basis_vector<T>(a), y = space.basis_vector<T>(b);
        const auto diff = screen_expansion(comp, x, y) - screen_block(r, x, y);
        expansion_ok = expansion_ok && diff.is_zero(tol);
      }
    per_tensor.push_back({{"P0", p0}, {"P", p}, {"Q", q}, {"q_generated_by_p", generated}});
  }
  const auto hol = generate_holonomy(tensors, space, tol);
  std::vector<Matrix<T>> projected;
  for (const auto& x : hol.basis) projected.push_back(screen_projection(x, space, tol));
  const auto g = span_basis(projected, space.q(), tol);
  return {{"signature", io::signature_to_json(space)},
          {"components", per_tensor},
          {"q_generated_by_p", all_generated},
          {"expansion_matches", expansion_ok},
          {"holonomy_dim", hol.dim()},
          {"screen_algebra_dim", g.size()},
          {"screen_algebra", io::matrices_to_json(g)}};
}

template <Scalar T>
json cmd_decompose(const json& in, Tolerance tol, std::uint64_t seed) {
  const auto h = io::algebra_from_json<T>(in, tol);
  const auto analysis = invariant_subspace_analysis(h, tol, seed);
  json out = io::splitting_to_json(analysis);
  out["algebra_dim"] = h.dim();
  out["space_dim"] = h.space_dim();
  const auto [neg, pos] = inertia(h.gram);
  json flags = json::object();
  if (neg == 0 && pos == h.space_dim()) {
    const auto bl = borel_lichnerowicz(h, tol, seed);
    out["bl"] = io::bl_to_json(bl);
    out["modules"] = out["bl"]["modules"];
    out["ideals"] = out["bl"]["ideals"];
    out["witness"] = bl.holds() ? out["witness"] : out["bl"]["witness"];
    flags["borel_lichnerowicz"] = bl.holds();
    if (bl.holds()) out["keylemma"] = io::keylemma_to_json(keylemma_check(*bl.decomposition, tol));
  } else if (neg == 1 && pos + 1 == h.space_dim()) {
    out["lorentzian"] = io::lorentzian_to_json(lorentzian_splitting(h, {}, tol, seed));
  }
  if (in.contains("curvature")) {
    CurvatureTable<T> table;
    table.gram = h.gram;
    const std::size_t n = h.space_dim();
    const auto& v = in.at("curvature");
    table.values.assign(n * n * n * n, ScalarTraits<T>::zero());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d)
            table.at(a, b, c, d) = io::scalar_from_json<T>(v.at(a).at(b).at(c).at(d));
    const auto sys = holonomy_system_check(table, h, tol);
    out["scal"] = io::scalar_to_json(sys.scal);
    flags["irreducible"] = sys.irreducible;
    flags["nonzero"] = sys.nonzero;
    flags["symmetric_flag"] = sys.symmetric_flag;
  }
  out["flags"] = flags;
  return out;
}

template <Scalar T>
json cmd_classify_bbi(const json& in, Tolerance tol, std::uint64_t seed) {
  LieAlgebraSpan<T> h;
  if (in.contains("construct")) {
    const auto& c = in.at("construct");
    const auto tag = parse_bbi_type(c.at("type").get<std::string>());
    const auto g = c.contains("g") ? matrices_from<T>(c.at("g")) : std::vector<Matrix<T>>{};
    std::vector<T> phi;
    std::vector<Vector<T>> psi;
    if (c.contains("phi")) phi = io::vector_from_json<T>(c.at("phi"));
    if (c.contains("psi"))
      for (const auto& x : c.at("psi")) psi.push_back(io::vector_from_json<T>(x));
    h = construct_type(tag, g, c.at("m").get<std::size_t>(), phi, psi,
                       c.value("ell", std::size_t{0}), tol);
  } else {
    h = io::algebra_from_json<T>(in, tol);
  }
  json out = io::bbi_to_json(classify_bbi(h, tol, seed));
  out["algebra_dim"] = h.dim();
  if (in.contains("construct")) out["generators"] = io::matrices_to_json(h.basis);
  return out;
}

template <Scalar T>
Matrix<T> metric_from(const json& in) {
  return in.contains("metric") ? io::matrix_from_json<T>(in.at("metric")) : Matrix<T>{};
}

template <Scalar T>
json cmd_weak_berger(const json& in, Tolerance tol) {
  const auto [h, q] = screen_generators<T>(in, tol);
  const auto metric = metric_from<T>(in);
  const auto r = is_weak_berger(h, q, metric, tol);
  return {{"weak_berger", r.weak_berger},
          {"achieved_dim", r.achieved_dim},
          {"algebra_dim", r.algebra_dim},
          {"dim_B", weak_curvature_space(h, q, metric, tol).dim()},
          {"q", q}};
}

template <Scalar T>
json cmd_curvature_space(const json& in, Tolerance tol) {
  const auto [h, q] = screen_generators<T>(in, tol);
  const auto metric = metric_from<T>(in);
  json out{{"dim_K", curvature_space(h, q, tol).dim()},
           {"dim_B", weak_curvature_space(h, q, metric, tol).dim()},
           {"algebra_dim", h.size()},
           {"q", q}};
  try {
    out["weak_berger"] = is_weak_berger(h, q, metric, tol).weak_berger;
  } catch (const NotLieClosed&) {
    out["weak_berger"] = nullptr;
    out["lie_closed"] = false;
  }
  return out;
}

geometry::JetMethod method_from(const json& in) {
  const auto m = in.value("method", std::string("fd"));
  if (m == "fd") return geometry::JetMethod::FiniteDifference;
  if (m == "ad") return geometry::JetMethod::Automatic;
  throw InvalidInput("method must be \"fd\" or \"ad\"");
}

std::vector<std::vector<std::vector<double>>> loops_from(const json& j) {
  std::vector<std::vector<std::vector<double>>> loops;
  for (const auto& l : j) loops.push_back(io::points_from_json(l));
  return loops;
}

json cmd_geometry(const json& in) {
  const auto imm = io::immersion_from_json(in.at("immersion"));
  const auto samples = io::points_from_json(in.at("samples"));
  const auto method = method_from(in);
  json jets = json::array();
  for (const auto& u : samples) jets.push_back(io::point_jet_to_json(geometry::point_jet(imm, u, method)));
  json out{{"family", imm.family}, {"jets", jets}, {"mode", "float"}};
  const json checks = in.value("checks", json::object());
  if (checks.contains("light_cone")) {
    const auto& c = checks.at("light_cone");
    out["light_cone"] = io::light_cone_to_json(geometry::light_cone_check(
        imm, samples, loops_from(c.value("loops", json::array())), c.value("steps", 512),
        c.value("strict", false), method));
  }
  if (checks.contains("parallel_pi")) {
    const auto& c = checks.at("parallel_pi");
    out["parallel_pi"] = io::parallel_pi_to_json(geometry::parallel_pi_check(
        imm, samples, c.value("tol", 1e-6), c.value("spectrum_tol", 1e-8)));
  }
  if (checks.contains("transport")) {
    const auto& c = checks.at("transport");
    json ts = json::array();
    for (const auto& loop : loops_from(c.at("loops"))) {
      const auto t = geometry::parallel_transport(imm, loop, c.value("steps", 512));
      ts.push_back({{"tau", io::matrix_to_json(t.tau)},
                    {"steps", t.steps},
                    {"residual", t.residual}});
    }
    out["transports"] = ts;
  }
  if (checks.contains("mean_curvature")) {
    const auto& c = checks.at("mean_curvature");
    std::optional<std::vector<double>> inject;
    if (c.contains("inject")) inject = c.at("inject").get<std::vector<double>>();
    json cases = json::array();
    for (const auto& u : samples)
      cases.push_back(io::mean_curvature_to_json(
          geometry::mean_curvature_case(geometry::point_jet(imm, u, method), inject)));
    out["mean_curvature"] = cases;
  }
  return out;
}

json cmd_pipeline(const json& in, const RunConfig& rc) {
  const auto imm = io::immersion_from_json(in.at("immersion"));
  PipelineConfig c;
  c.samples = io::points_from_json(in.at("samples"));
  if (in.contains("base")) c.base = in.at("base").get<std::vector<double>>();
  if (in.contains("loops")) c.loops = loops_from(in.at("loops"));
  c.steps = in.value("steps", std::size_t{512});
  c.method = in.contains("method") ? method_from(in) : geometry::JetMethod::Automatic;
  c.rank_tol = in.value("rank_tol", 1e-6);
  if (in.contains("inject_mean_curvature"))
    c.inject_mean_curvature = in.at("inject_mean_curvature").get<std::vector<double>>();
  c.mode = rc.mode == "exact" ? ScalarMode::Exact
           : rc.mode == "float" ? ScalarMode::Float
                                : ScalarMode::Auto;
  c.tol = rc.tol;
  c.seed = rc.seed;
  return run_pipeline(imm, c);
}

template <Scalar T>
json dispatch_algebraic(const RunConfig& rc, const json& in) {
  const Tolerance tol{rc.tol};
  const auto& s = rc.subcommand;
  if (s == "curvature") return cmd_curvature<T>(in, tol);
  if (s == "screen") return cmd_screen<T>(in, tol);
  if (s == "decompose") return cmd_decompose<T>(in, tol, rc.seed);
  if (s == "classify-bbi") return cmd_classify_bbi<T>(in, tol, rc.seed);
  if (s == "weak-berger") return cmd_weak_berger<T>(in, tol);
  if (s == "curvature-space") return cmd_curvature_space<T>(in, tol);
  throw InternalError("unhandled subcommand " + s);
}

json execute_config(const RunConfig& rc, const json& in) {
  try {
    if (rc.subcommand == "geometry") {
      if (rc.mode == "exact")
        throw InvalidInput("geometry works on floating-point jets only; use --mode float");
      return cmd_geometry(in);
    }
    if (rc.subcommand == "pipeline") return cmd_pipeline(in, rc);
    json out = rc.mode == "float" ? dispatch_algebraic<double>(rc, in)
                                  : dispatch_algebraic<Rational>(rc, in);
    out["mode"] = rc.mode == "float" ? "float" : "exact";
    return out;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad input field: ") + e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normal holonomy of spacelike submanifolds: algebraic and geometric checks"};
  app.name(args.empty() ? "normhol" : args[0]);
  app.require_subcommand(1);
  RunConfig rc;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"curvature", "Curvature tensor of a shape family and its identities"},
      {"screen", "Screen components P0, P_i, Q_ij and the screen algebra"},
      {"decompose", "Invariant subspaces, Borel-Lichnerowicz and key lemma checks"},
      {"classify-bbi", "Classify a weakly irreducible subalgebra of so(1, m+1)"},
      {"weak-berger", "Weak Berger test for a subalgebra of so(q)"},
      {"curvature-space", "Dimensions of K(h) and B_h(h)"},
      {"geometry", "Jets, transports and checks for a parametrized immersion"},
      {"pipeline", "End-to-end normal holonomy analysis of an immersion"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* input = sub->add_option("--input", rc.input, "Input JSON file");
    if (name == "curvature-space")
      sub->add_option("--algebra", rc.input, "Alias of --input")->excludes(input);
    sub->add_option("--mode", rc.mode, "exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol", rc.tol, "Relative tolerance (float mode)");
    sub->add_option("--seed", rc.seed, "Seed for randomized steps");
    sub->add_option("--report", rc.report, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->callback([&rc, name = name] { rc.subcommand = name; });
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("normhol");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const json report = execute(rc.subcommand, read_input(rc.input), rc.mode, rc.tol, rc.seed);
    out << io::render(report, rc.report == "text");
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

json execute(const std::string& subcommand, const json& input, const std::string& mode,
             double tol, std::uint64_t seed) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
    throw InvalidInput("unknown subcommand '" + subcommand + "'");
  if (!mode.empty() && mode != "exact" && mode != "float")
    throw InvalidInput("mode must be \"exact\" or \"float\"");
  if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
  RunConfig rc;
  rc.subcommand = subcommand;
  rc.mode = mode;
  rc.tol = tol;
  rc.seed = seed;
  return execute_config(rc, input);
}

}  // namespace normhol::cli
