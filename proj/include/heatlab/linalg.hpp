#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace heatlab {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  double trace() const;
  /// Largest absolute entry.
  double max_abs() const;
  /// Induced infinity norm (max absolute row sum).
  double norm_inf() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
std::vector<double> operator*(const Matrix& a, std::span<const double> v);

/// max |a(i,j) - b(i,j)|; matrices must agree in shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues are sorted
/// ascending; column i of `vectors` is the unit eigenvector for values[i].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Householder tridiagonalization followed by implicit QL with Wilkinson
/// shifts. Only the lower triangle of `a` is read. Throws
/// EigensolverNoConvergence when an eigenvalue needs more than
/// `max_sweeps_per_value` QL iterations.
SymmetricEigen symmetric_eigen(const Matrix& a, int max_sweeps_per_value = 60);

/// Same algorithm without accumulating eigenvectors.
std::vector<double> symmetric_eigenvalues(const Matrix& a, int max_sweeps_per_value = 60);

/// max_i ||A v_i - lambda_i v_i||_2.
double eigen_residual(const Matrix& a, const SymmetricEigen& eig);

/// Sum of exp(-scale * lambda) over the given spectrum, added smallest term first.
double exp_trace(std::span<const double> eigenvalues, double scale);

}  // namespace heatlab
