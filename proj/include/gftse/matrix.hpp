#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gftse {

// Dense row-major matrix of doubles.  Small enough to stay header-light:
// the toolkit only needs construction, element access and a few products.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Complex counterpart, used by the DFT and EVD paths.
class CMatrix {
 public:
  using value_type = std::complex<double>;

  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  value_type* row(std::size_t i) { return data_.data() + i * cols_; }
  const value_type* row(std::size_t i) const { return data_.data() + i * cols_; }

  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  std::vector<value_type> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
// a * b^T, the common case when applying a basis to stacked frame rows.
Matrix matmul_bt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix matmul(const Matrix& a, const CMatrix& b);

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace gftse
