#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "normhol/errors.hpp"
#include "normhol/scalar.hpp"

namespace normhol {

/// Dense row-major matrix over an exact or floating scalar.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<T>::zero()) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
    return m;
  }
  static Matrix column(std::span<const T> v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> flat() const { return data_; }
  std::span<T> flat() { return data_; }

  std::vector<T> col(std::size_t c) const {
    std::vector<T> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }
  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, ScalarTraits<T>::magnitude(x));
    return m;
  }
  bool is_zero(Tolerance tol = {}, double scale = 1.0) const {
    for (const auto& x : data_)
      if (!ScalarTraits<T>::is_zero(x, scale, tol)) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if constexpr (ScalarTraits<T>::exact) {
          if (sgn(aik) == 0) continue;
        }
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
using Vector = std::vector<T>;

template <Scalar T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product");
  Vector<T> y(a.rows(), ScalarTraits<T>::zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <Scalar T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product");
  T s = ScalarTraits<T>::zero();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Scalar T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

template <Scalar T>
T trace(const Matrix<T>& a) {
  T s = ScalarTraits<T>::zero();
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) s += a(i, i);
  return s;
}

/// Columns of `cols` side by side.
template <Scalar T>
Matrix<T> hstack(const std::vector<Vector<T>>& cols, std::size_t n) {
  Matrix<T> m(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n) throw DimensionMismatch("hstack");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

template <Scalar T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hconcat");
  Matrix<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

/// Row-major flattening of a square matrix into a vector.
template <Scalar T>
Vector<T> vectorize(const Matrix<T>& a) {
  return Vector<T>(a.flat().begin(), a.flat().end());
}

template <Scalar T>
Matrix<T> unvectorize(std::span<const T> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("unvectorize");
  Matrix<T> m(rows, cols);
  std::copy(v.begin(), v.end(), m.flat().begin());
  return m;
}

// ---------------------------------------------------------------------------
// Row reduction. Exact mode picks the first nonzero pivot in each column
// (lexicographic); float mode uses partial pivoting with a relative threshold.

template <Scalar T>
struct Echelon {
  Matrix<T> reduced;                 ///< reduced row echelon form
  std::vector<std::size_t> pivots;   ///< pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

template <Scalar T>
Echelon<T> rref(Matrix<T> m, Tolerance tol = {}) {
  using Tr = ScalarTraits<T>;
  const double scale = m.max_abs();
  Echelon<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = m.rows();
    if constexpr (Tr::exact) {
      // smallest entry (in limbs) limits coefficient growth
      std::size_t best = 0;
      for (std::size_t i = r; i < m.rows(); ++i)
        if (sgn(m(i, c)) != 0) {
          const std::size_t size = mpz_size(m(i, c).get_num_mpz_t()) +
                                   mpz_size(m(i, c).get_den_mpz_t());
          if (piv == m.rows() || size < best) {
            piv = i;
            best = size;
          }
        }
    } else {
      double best = 0.0;
      for (std::size_t i = r; i < m.rows(); ++i) {
        const double a = std::fabs(m(i, c));
        if (a > best && !Tr::is_zero(m(i, c), scale, tol)) {
          best = a;
          piv = i;
        }
      }
    }
    if (piv == m.rows()) {
      if constexpr (!Tr::exact)
        for (std::size_t i = r; i < m.rows(); ++i) m(i, c) = 0.0;
      continue;
    }
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    const T inv = Tr::one() / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const T f = m(i, c);
      if (Tr::is_zero(f, 0.0, Tolerance{0.0})) continue;
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
      m(i, c) = Tr::zero();
    }
    out.pivots.push_back(c);
    ++r;
  }
  if constexpr (!Tr::exact)
    for (std::size_t i = r; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = 0.0;
  out.reduced = std::move(m);
  return out;
}

template <Scalar T>
std::size_t rank(const Matrix<T>& m, Tolerance tol = {}) {
  return rref(m, tol).rank();
}

/// Basis of {x : m x = 0} as columns, one per free variable.
template <Scalar T>
Matrix<T> nullspace(const Matrix<T>& m, Tolerance tol = {}) {
  const auto e = rref(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<T> v(m.cols(), ScalarTraits<T>::zero());
    v[f] = ScalarTraits<T>::one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return hstack(basis, m.cols());
}

/// Nonzero rows of the reduced echelon form, i.e. a canonical row-space basis.
template <Scalar T>
Matrix<T> row_space(const Matrix<T>& m, Tolerance tol = {}) {
  const auto e = rref(m, tol);
  return e.reduced.block(0, 0, e.rank(), m.cols());
}

/// Some solution x of a x = b, or nullopt when inconsistent.
template <Scalar T>
std::optional<Vector<T>> solve(const Matrix<T>& a, const Vector<T>& b, Tolerance tol = {}) {
  if (a.rows() != b.size()) throw DimensionMismatch("solve");
  Matrix<T> aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < b.size(); ++i) aug(i, a.cols()) = b[i];
  const auto e = rref(aug, tol);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  Vector<T> x(a.cols(), ScalarTraits<T>::zero());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

/// Solve a X = b column by column; nullopt when any column is inconsistent.
template <Scalar T>
std::optional<Matrix<T>> solve(const Matrix<T>& a, const Matrix<T>& b, Tolerance tol = {}) {
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    auto xc = solve(a, b.col(c), tol);
    if (!xc) return std::nullopt;
    for (std::size_t r = 0; r < a.cols(); ++r) x(r, c) = (*xc)[r];
  }
  return x;
}

template <Scalar T>
Matrix<T> inverse(const Matrix<T>& a, Tolerance tol = {}) {
  if (!a.square()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = a.rows();
  const auto e = rref(hconcat(a, Matrix<T>::identity(n)), tol);
  if (e.rank() < n || e.pivots[n - 1] != n - 1) throw InvalidInput("matrix is singular");
  return e.reduced.block(0, n, n, n);
}

/// Entrywise conversion from exact to the requested scalar type.
template <Scalar T>
Matrix<T> convert_matrix(const Matrix<Rational>& a) {
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = convert_scalar<T>(a(r, c));
  return out;
}

/// Entrywise rounding to double.
template <Scalar T>
Matrix<double> to_double_matrix(const Matrix<T>& a) {
  Matrix<double> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = ScalarTraits<T>::to_double(a(r, c));
  return out;
}

}  // namespace normhol
