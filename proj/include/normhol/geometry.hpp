#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normhol/curvature.hpp"

namespace normhol::geometry {

/// Value, gradient and Hessian of a scalar function of k variables
/// (second-order forward-mode differentiation).
class Jet {
 public:
  Jet() = default;
  Jet(double value, std::size_t k) : v_(value), g_(k, 0.0), h_(k * k, 0.0) {}
  static Jet variable(double value, std::size_t index, std::size_t k) {
    Jet j(value, k);
    j.g_.at(index) = 1.0;
    return j;
  }

  double value() const { return v_; }
  double d(std::size_t i) const { return g_[i]; }
  double dd(std::size_t i, std::size_t j) const { return h_[i * size() + j]; }
  std::size_t size() const { return g_.size(); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, double s) { return a + Jet(s, a.size()); }
  friend Jet operator+(double s, Jet a) { return Jet(s, a.size()) + a; }
  friend Jet operator-(Jet a, double s) { return a - Jet(s, a.size()); }
  friend Jet operator-(double s, Jet a) { return Jet(s, a.size()) - a; }
  friend Jet operator*(Jet a, double s) { return a * Jet(s, a.size()); }
  friend Jet operator*(double s, Jet a) { return Jet(s, a.size()) * a; }
  friend Jet operator/(Jet a, double s) { return a / Jet(s, a.size()); }
  friend Jet operator/(double s, Jet a) { return Jet(s, a.size()) / a; }

  /// f(this) given f, f', f'' at the value.
  Jet apply(double f, double df, double ddf) const;

 private:
  double v_ = 0.0;
  std::vector<double> g_, h_;
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet pow(const Jet& x, const Jet& p);

/// Expression tree for custom immersions. Leaves are constants or parameter
/// variables u0, u1, ...; operators are + - * / pow sin cos exp sqrt.
struct Expr {
  enum class Kind { Constant, Variable, Op };
  Kind kind = Kind::Constant;
  double constant = 0.0;
  std::size_t variable = 0;
  std::string op;
  std::vector<Expr> args;

  Jet evaluate(const std::vector<Jet>& u) const;
  /// Throws InvalidInput for unknown operators or bad arity.
  void validate(std::size_t parameter_dim) const;
};

using JetMap = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

/// Spacelike immersion u -> x(u) into R^{1,N}; points have N+1 coordinates,
/// the first one timelike.
struct Immersion {
  std::string family;
  std::size_t ambient_dim = 0;  ///< N
  std::size_t parameter_dim = 0;
  double h = 1e-3;
  /// The position vector is a null normal field (light-cone sections).
  bool light_cone = false;
  JetMap map;

  std::vector<double> evaluate(const std::vector<double>& u) const;
  std::vector<Jet> jet(const std::vector<double>& u) const;
};

/// x(u) = origin + sum u_i directions_i.
Immersion affine(std::vector<double> origin, std::vector<std::vector<double>> directions);
/// Round S^dim(radius) in the spatial coordinates 1..dim+1 of R^{1,ambient},
/// hyperspherical angles as parameters.
Immersion sphere(double radius, std::size_t dim, std::size_t ambient_dim);
/// S^{d_1}(r_1) x ... placed in consecutive spatial blocks.
Immersion product_spheres(std::vector<double> radii, std::vector<std::size_t> dims,
                          std::size_t ambient_dim);
/// x(u) = f(u) (1, n(u)) with f = c exp(a . u) and n(u) on the unit sphere.
/// With codim3 set, n(u) = normalize(s(u), warp * s_1 s_2 + tan(rho)) lies in
/// S^{dim+1}, giving codimension 3.
Immersion light_cone_section(std::size_t dim, double c, std::vector<double> a, bool codim3 = false,
                             double rho = 0.0, double warp = 0.0);
/// x(u) = (sqrt(R^2 + |u|^2), u, 0, ...) in R^{1,ambient}.
Immersion hyperbolic(std::size_t dim, double radius, std::size_t ambient_dim);
Immersion custom(std::vector<Expr> components, std::size_t parameter_dim);

enum class JetMethod { FiniteDifference, Automatic };

/// Frames, second fundamental form and shape operators at one point. The
/// normal frame has columns (v, e_1..e_q, w) matching SignatureSpace(1, q).
struct PointJet {
  std::vector<double> u;
  std::vector<double> point;
  Matrix<double> induced_metric;   ///< g_ij in coordinates
  Matrix<double> tangent_frame;    ///< (N+1) x n, orthonormal
  Matrix<double> normal_frame;     ///< (N+1) x (q+2)
  SignatureSpace space;
  std::vector<std::vector<double>> pi;  ///< Pi(t_a, t_b) as ambient vectors, index a*n+b
  std::vector<double> mean_curvature;   ///< ambient vector H
  ShapeFamily<double> shapes;

  std::size_t dim() const { return u.size(); }
  /// A_xi for an ambient normal vector xi.
  Matrix<double> shape_operator(const std::vector<double>& xi) const;
};

/// Lorentzian inner product with eta = diag(-1, 1, ..., 1).
double eta(const std::vector<double>& x, const std::vector<double>& y);

/// Throws DegenerateMetric when the induced metric is not positive definite
/// or the normal fiber has dimension below 2.
PointJet point_jet(const Immersion& imm, const std::vector<double>& u,
                   JetMethod method = JetMethod::FiniteDifference,
                   std::optional<double> h = std::nullopt);

struct TransportResult {
  std::vector<std::vector<double>> path;  ///< polyline in parameter space
  Matrix<double> tau;                     ///< fiber map in frame coordinates
  Matrix<double> ambient;                 ///< fundamental solution on R^{1,N}
  std::size_t steps = 0;
  double residual = 0.0;                  ///< max |tau^T G tau - G|
};

/// Normal parallel transport along a polyline with classical RK4; steps are
/// distributed over segments by length. tau maps the frame at the start to
/// the frame at the end. Throws DegenerateMetric along the path.
TransportResult transport_path(const Immersion& imm, const std::vector<std::vector<double>>& path,
                               std::size_t steps = 512);
/// Same for a closed loop; a closing segment is appended unless the last
/// vertex has the same image as the first. steps >= 8.
TransportResult parallel_transport(const Immersion& imm,
                                   const std::vector<std::vector<double>>& loop,
                                   std::size_t steps = 512);

struct LightConeSample {
  std::vector<double> u;
  double vv = 0.0;             ///< <V,V>
  bool on_cone = false;        ///< |<V,V>| <= 1e-9 |V|^2
  double shape_residual = 0.0; ///< max |A_V + id|
  bool v_normal = false;       ///< V orthogonal to TM
};

struct LightConeReport {
  std::vector<LightConeSample> samples;
  std::vector<double> loop_residuals;  ///< max |Phi V - V| per loop
  bool all_on_cone = false;
};

/// Throws NotOnCone when `strict` and some sample is off the cone.
LightConeReport light_cone_check(const Immersion& imm,
                                 const std::vector<std::vector<double>>& samples,
                                 const std::vector<std::vector<std::vector<double>>>& loops = {},
                                 std::size_t steps = 512, bool strict = false,
                                 JetMethod method = JetMethod::FiniteDifference);

struct ParallelPiSample {
  std::vector<double> u;
  double residual = 0.0;               ///< max |(nabla Pi)(X,Y,Z)|
  std::vector<double> eigenvalues;     ///< sorted spectrum of A_H
  std::vector<double> distinct;        ///< distinct eigenvalues
};

struct ParallelPiReport {
  std::vector<ParallelPiSample> samples;
  bool parallel = false;               ///< every residual <= tol
  bool constant_spectrum = false;      ///< spectra agree across samples
  std::vector<double> eigenvalues;     ///< (lambda_1..lambda_r) at the first sample
  double spectrum_spread = 0.0;
};

ParallelPiReport parallel_pi_check(const Immersion& imm,
                                   const std::vector<std::vector<double>>& samples,
                                   double tol = 1e-6, double spectrum_tol = 1e-8);

enum class MeanCurvatureClass { Zero, Timelike, Null, Spacelike };
std::string to_string(MeanCurvatureClass c);

struct MeanCurvatureCase {
  MeanCurvatureClass h_class = MeanCurvatureClass::Zero;
  double hh = 0.0;            ///< <H,H>
  double a_h_norm = 0.0;      ///< max |A_H|
  bool contradiction = false; ///< null nonzero H (impossible for full examples)
  std::string reason;
};

/// Classifies H (or an injected vector in its place) and flags the
/// null-mean-curvature contradiction.
MeanCurvatureCase mean_curvature_case(const PointJet& jet,
                                      const std::optional<std::vector<double>>& injected = {},
                                      double tol = 1e-8);

}  // namespace normhol::geometry
