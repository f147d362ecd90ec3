#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coshtx {

/// Small dense row-major matrix. Dimensions here never exceed 64.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<std::vector<double>> to_rows() const;
  Matrix transpose() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> operator*(const Matrix& a, std::span<const double> x);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
};

/// Dense symmetric eigendecomposition: Householder reduction to tridiagonal
/// form followed by implicit-shift QL. Only the lower triangle is read.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Eigendecomposition of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (off.size() == diag.size() - 1).
SymmetricEigen tridiagonal_eigen(std::span<const double> diag,
                                 std::span<const double> off);

double determinant(const Matrix& a);
Matrix inverse(const Matrix& a);  // throws InvalidInput when singular
double spectral_norm(const Matrix& a);
double norm2(std::span<const double> x);

}  // namespace coshtx
