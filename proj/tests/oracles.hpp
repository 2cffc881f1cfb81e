#pragma once

// Floating-point oracles built on Eigen with full 4-index unknowns. They share
// no code with the library's constraint assembly.

#include <Eigen/Dense>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;

inline Eigen::Index null_dim(const Mat& c) {
  if (c.cols() == 0) return 0;
  if (c.rows() == 0) return c.cols();
  Eigen::FullPivLU<Mat> lu(c);
  lu.setThreshold(1e-10);
  return c.cols() - lu.rank();
}

// Rows spanning the orthogonal complement of span(h) in R^{q*q}.
inline Mat complement_rows(const std::vector<Mat>& h, int q) {
  const int n2 = q * q;
  if (h.empty()) return Mat::Identity(n2, n2);
  Mat span(n2, static_cast<int>(h.size()));
  for (std::size_t k = 0; k < h.size(); ++k)
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) span(r * q + c, static_cast<int>(k)) = h[k](r, c);
  Eigen::FullPivLU<Mat> lu(span.transpose());
  lu.setThreshold(1e-10);
  Mat k = lu.kernel();
  if (lu.rank() == n2) return Mat(0, n2);
  return k.transpose();
}

// dim K(h): unknowns R(x,y)_{r,z} for all ordered x, y.
inline Eigen::Index dim_K(const std::vector<Mat>& h, int q) {
  const int unknowns = q * q * q * q;
  auto idx = [q](int x, int y, int r, int z) { return ((x * q + y) * q + r) * q + z; };
  const Mat comp = complement_rows(h, q);
  std::vector<Eigen::VectorXd> rows;
  auto push = [&](const Eigen::VectorXd& v) { rows.push_back(v); };
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y) {
      for (int r = 0; r < q; ++r)
        for (int z = 0; z < q; ++z) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
          v[idx(x, y, r, z)] += 1;
          v[idx(y, x, r, z)] += 1;
          push(v);
        }
      for (int i = 0; i < comp.rows(); ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
        for (int r = 0; r < q; ++r)
          for (int z = 0; z < q; ++z) v[idx(x, y, r, z)] = comp(i, r * q + z);
        push(v);
      }
    }
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      for (int z = 0; z < q; ++z)
        for (int r = 0; r < q; ++r) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
          v[idx(x, y, r, z)] += 1;
          v[idx(y, z, r, x)] += 1;
          v[idx(z, x, r, y)] += 1;
          push(v);
        }
  Mat c(static_cast<int>(rows.size()), unknowns);
  for (std::size_t i = 0; i < rows.size(); ++i) c.row(static_cast<int>(i)) = rows[i];
  return null_dim(c);
}

// dim B_h(h) with the standard metric: unknowns Q(x)_{r,c}.
inline Eigen::Index dim_B(const std::vector<Mat>& h, int q) {
  const int unknowns = q * q * q;
  auto idx = [q](int x, int r, int c) { return (x * q + r) * q + c; };
  const Mat comp = complement_rows(h, q);
  std::vector<Eigen::VectorXd> rows;
  for (int x = 0; x < q; ++x)
    for (int i = 0; i < comp.rows(); ++i) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
      for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c) v[idx(x, r, c)] = comp(i, r * q + c);
      rows.push_back(v);
    }
  // <Q(x)y, z> = Q(x)_{z,y}
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      for (int z = 0; z < q; ++z) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
        v[idx(x, z, y)] += 1;
        v[idx(y, x, z)] += 1;
        v[idx(z, y, x)] += 1;
        rows.push_back(v);
      }
  Mat c(static_cast<int>(rows.size()), unknowns);
  for (std::size_t i = 0; i < rows.size(); ++i) c.row(static_cast<int>(i)) = rows[i];
  return null_dim(c);
}

inline std::vector<Mat> so_basis(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat m = Mat::Zero(n, n);
      m(i, j) = 1;
      m(j, i) = -1;
      out.push_back(m);
    }
  return out;
}

// Rank of the linear span of square matrices.
inline Eigen::Index span_rank(const std::vector<Mat>& mats) {
  if (mats.empty()) return 0;
  const auto n2 = mats[0].size();
  Mat m(n2, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k)
    m.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(mats[k].data(), n2);
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

}  // namespace oracle
