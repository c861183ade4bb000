#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tensor.hpp"

namespace diagex {

using Matrix = Eigen::MatrixXcd;

inline Matrix to_eigen(const Tensor& t) {
  require_matrix(t);
  Matrix m(t.shape[0], t.shape[1]);
  for (int i = 0; i < t.shape[0]; ++i)
    for (int j = 0; j < t.shape[1]; ++j) m(i, j) = t.at({i, j});
  return m;
}

inline Tensor from_eigen(const Matrix& m) {
  Tensor t({static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t.at({i, j}) = m(i, j);
  return t;
}

inline bool is_hermitian(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Smallest eigenvalue of the Hermitian part (m + m*)/2.
inline double min_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("min_eigenvalue: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

inline bool is_psd(const Matrix& m, double tol = kDefaultTol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

inline double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double entrywise_norm(const Matrix& m) { return m.cwiseAbs().sum(); }

inline bool entrywise_nonnegative(const Matrix& m, double tol = kDefaultTol) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j).real() < -tol || std::abs(m(i, j).imag()) > tol) return false;
  return true;
}

}  // namespace diagex
