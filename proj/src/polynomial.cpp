#include "polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>

namespace normhol::poly {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

Poly monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  Poly r = a, bb = b;
  trim(r);
  trim(bb);
  if (bb.empty()) throw InternalError("polynomial division by zero");
  const int db = degree(bb);
  Poly q(std::max(0, degree(r) - db + 1), Rational(0));
  while (degree(r) >= db) {
    const int dr = degree(r);
    const Rational f = r[dr] / bb[db];
    q[dr - db] = f;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= f * bb[i];
    trim(r);
  }
  trim(q);
  return {q, r};
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

Rational evaluate(const Poly& p, const Rational& x) {
  Rational s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

namespace {

int sign(const Rational& x) { return sgn(x); }

int sign_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int real_root_count(const Poly& p0) {
  Poly p = p0;
  trim(p);
  if (degree(p) <= 0) return 0;
  std::vector<Poly> seq{p, derivative(p)};
  while (degree(seq.back()) > 0) {
    Poly r = divmod(seq[seq.size() - 2], seq.back()).second;
    for (auto& c : r) c = -c;
    trim(r);
    if (r.empty()) break;
    seq.push_back(r);
  }
  std::vector<int> at_pos, at_neg;
  for (const auto& s : seq) {
    const int d = degree(s);
    const int lead = sign(s[d]);
    at_pos.push_back(lead);
    at_neg.push_back(d % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_neg) - sign_changes(at_pos);
}

namespace {

mpz_class evaluate_integer(const std::vector<mpz_class>& p, const mpz_class& y) {
  mpz_class s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * y + *it;
  return s;
}

// Integer root of p in [lo, hi] by exact bisection, when p changes sign there.
std::optional<mpz_class> integer_root(const std::vector<mpz_class>& p, mpz_class lo,
                                      mpz_class hi) {
  int s_lo = sgn(evaluate_integer(p, lo));
  const int s_hi = sgn(evaluate_integer(p, hi));
  if (s_lo == 0) return lo;
  if (s_hi == 0) return hi;
  if (s_lo == s_hi) return std::nullopt;
  while (hi - lo > 1) {
    mpz_class mid = lo + (hi - lo) / 2;
    const int s = sgn(evaluate_integer(p, mid));
    if (s == 0) return mid;
    if (s == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Rational> rational_roots(const Poly& p0) {
  Poly p = monic(p0);
  const int d = degree(p);
  std::vector<Rational> roots;
  if (d <= 0) return roots;
  if (d == 1) return {Rational(-p[0])};
  // With D the common denominator, P(y) = D^d p(y / D) is monic over Z, so the
  // rational roots of p are y / D for the integer roots y of P.
  mpz_class den = 1;
  for (const auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> big(static_cast<std::size_t>(d) + 1);
  mpz_class power = 1;
  for (int i = d; i >= 0; --i) {
    const Rational c = p[i] * power;
    big[i] = c.get_num();
    power *= den;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const double scale_d = den.get_d();
  for (int i = 0; i < d; ++i) {
    const auto z = es.eigenvalues()[i];
    const double scale = 1.0 + std::abs(z.real());
    if (std::abs(z.imag()) > 1e-5 * scale) continue;
    const double y = z.real() * scale_d;
    if (!std::isfinite(y)) continue;
    std::optional<mpz_class> root;
    for (const double guess : {std::round(y), std::floor(y), std::ceil(y)})
      if (!root && evaluate_integer(big, mpz_class(guess)) == 0) root = mpz_class(guess);
    if (!root) {
      const double w = 1e-6 * std::abs(y);
      root = integer_root(big, mpz_class(std::floor(y - w)), mpz_class(std::ceil(y + w)));
    }
    if (!root) continue;
    Rational cand(*root, den);
    cand.canonicalize();
    bool seen = false;
    for (const auto& r : roots) seen = seen || r == cand;
    if (!seen) roots.push_back(cand);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Poly minimal_polynomial(const Matrix<Rational>& c) {
  const std::size_t n = c.rows();
  std::vector<Vector<Rational>> powers;
  Matrix<Rational> cur = Matrix<Rational>::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto v = vectorize(cur);
    if (!powers.empty()) {
      const Matrix<Rational> a = hstack(powers, n * n);
      if (auto x = solve(a, v, Tolerance{0.0})) {
        Poly m(k + 1, Rational(0));
        for (std::size_t i = 0; i < k; ++i) m[i] = -(*x)[i];
        m[k] = 1;
        return m;
      }
    }
    powers.push_back(v);
    cur = cur * c;
  }
  throw InternalError("minimal polynomial exceeded the matrix size");
}

Matrix<Rational> apply(const Poly& p, const Matrix<Rational>& c) {
  const std::size_t n = c.rows();
  Matrix<Rational> out(n, n);
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    out = out * c + Matrix<Rational>::identity(n) * *it;
  return out;
}

Poly radical(const Poly& p) {
  const Poly g = gcd(p, derivative(p));
  return monic(divmod(p, g).first);
}

int real_factor_count(const Poly& p) {
  const Poly r = radical(p);
  const int real = real_root_count(r);
  return real + (degree(r) - real) / 2;
}

}  // namespace normhol::poly
