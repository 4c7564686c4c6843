#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace bwrank {

/// Dense row-major matrix of doubles. Desk-scale dimensions; all arithmetic
/// routes through the runtime-dispatched kernels.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double a);

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double a, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);  // matmul

Matrix matmul(const Matrix& a, const Matrix& b);     // A * B
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // A * B^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // A^T * B

Matrix transpose(const Matrix& a);
Matrix symmetrize(const Matrix& a);  // (A + A^T)/2, square only
double trace(const Matrix& a);
double frob_norm(const Matrix& a);
double frob_norm_sq(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

Matrix hcat(const Matrix& a, const Matrix& b);
Matrix block(const Matrix& a, std::size_t r0, std::size_t c0,
             std::size_t rows, std::size_t cols);
void set_block(Matrix& a, std::size_t r0, std::size_t c0, const Matrix& b);
Matrix column(const Matrix& a, std::size_t j);  // as n×1

}  // namespace bwrank
