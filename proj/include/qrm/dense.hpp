#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qrm {

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial (row) pivoting, P A = L U.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;
};

/// Throws SingularMatrixError when a pivot magnitude is at or below 1e-300.
LuFactors lu_factor(Matrix a);
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b);

/// Thin SVD A = U diag(sigma) V^T from one-sided (Hestenes) Jacobi rotations.
/// Singular values are sorted in decreasing order; U is rows x k and V is
/// cols x k with k = min(rows, cols). Columns of U for zero singular values
/// are left zero.
struct Svd {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

Svd jacobi_svd(const Matrix& a);

/// Minimum-norm least-squares solution keeping singular values above
/// cutoff * sigma_max. Returns the number of values kept in `rank`.
std::vector<double> svd_solve(const Svd& svd, std::span<const double> b, double cutoff, int* rank);

double norm2(std::span<const double> v);

}  // namespace qrm
