#pragma once

#include <span>
#include <vector>

#include <Eigen/SVD>

#include "symtensor/tensor.hpp"

namespace symtensor {

inline Eigen::VectorXd singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double nuclear_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).sum();
}

/// Columns of the returned matrix are the given vectors.
inline Matrix column_matrix(std::span<const Vector> vectors) {
  if (vectors.empty()) return Matrix();
  Matrix m(vectors[0].size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  return m;
}

/// Numerical rank of the matrix of columns: singular values above tol * sigma_max.
inline std::size_t numerical_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd s = singular_values(m);
  if (s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

/// dim span{vectors} at relative tolerance `tol`.
inline std::size_t span_dimension(std::span<const Vector> vectors, double tol = 1e-8) {
  if (vectors.empty()) throw PreconditionError("span_dimension: empty vector list");
  return numerical_rank(column_matrix(vectors), tol);
}

/// Orthonormal basis (as columns) of span{vectors} at relative tolerance `tol`.
inline Matrix orthonormal_basis(std::span<const Vector> vectors, double tol = 1e-8) {
  const Matrix m = column_matrix(vectors);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto r = static_cast<Eigen::Index>(numerical_rank(m, tol));
  return svd.matrixU().leftCols(r);
}

/// Spectral norms of every mode unfolding. Each one bounds the injective norm
/// from above, since a unit elementary tensor has unit norm in every unfolding.
inline std::vector<double> flattening_norms(const Tensor& z) {
  std::vector<double> out;
  for (std::size_t k = 0; k < z.order(); ++k) out.push_back(spectral_norm(unfold(z, k)));
  return out;
}

/// min over modes of the unfolding spectral norm; a certified upper bound for epsilon(z).
inline double flattening_upper(const Tensor& z) {
  const auto f = flattening_norms(z);
  return *std::min_element(f.begin(), f.end());
}

/// Mean over modes of the unfolding spectral norms. Also an upper bound for
/// epsilon(z), and additionally never increased by sigma:
/// the unfolding of sigma(w) at any mode averages the unfoldings of w over all
/// modes (up to column permutations), so by the triangle inequality
/// mean(sigma(w)) <= mean(w).
inline double flattening_mean_upper(const Tensor& z) {
  const auto f = flattening_norms(z);
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(f.size());
}

}  // namespace symtensor
