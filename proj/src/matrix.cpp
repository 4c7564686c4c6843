#include "bwrank/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bwrank/errors.hpp"
#include "bwrank/kernels.hpp"

namespace bwrank {

namespace {
void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}
}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Matrix +=: shape mismatch");
  kernels::axpy(1.0, o.data(), data(), size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "Matrix -=: shape mismatch");
  kernels::axpy(-1.0, o.data(), data(), size());
  return *this;
}

Matrix& Matrix::operator*=(double a) {
  kernels::scale(a, data(), size());
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double a, Matrix m) { return m *= a; }
Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  kernels::gemm_nn(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "matmul_nt: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  kernels::gemm_nt(a.rows(), a.cols(), b.rows(), a.data(), b.data(), c.data());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "matmul_tn: inner dimensions differ");
  Matrix c(a.cols(), b.cols());
  kernels::gemm_tn(a.cols(), a.rows(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix symmetrize(const Matrix& a) {
  require(a.rows() == a.cols(), "symmetrize: matrix not square");
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

double trace(const Matrix& a) {
  require(a.rows() == a.cols(), "trace: matrix not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double frob_norm_sq(const Matrix& a) { return kernels::sum_sq(a.data(), a.size()); }
double frob_norm(const Matrix& a) { return std::sqrt(frob_norm_sq(a)); }

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0 && a.rows() == 0) return b;
  if (b.cols() == 0 && b.rows() == 0) return a;
  require(a.rows() == b.rows(), "hcat: row counts differ");
  Matrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::memcpy(c.row(i), a.row(i), a.cols() * sizeof(double));
    std::memcpy(c.row(i) + a.cols(), b.row(i), b.cols() * sizeof(double));
  }
  return c;
}

Matrix block(const Matrix& a, std::size_t r0, std::size_t c0,
             std::size_t rows, std::size_t cols) {
  require(r0 + rows <= a.rows() && c0 + cols <= a.cols(), "block: out of range");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    std::memcpy(b.row(i), a.row(r0 + i) + c0, cols * sizeof(double));
  return b;
}

void set_block(Matrix& a, std::size_t r0, std::size_t c0, const Matrix& b) {
  require(r0 + b.rows() <= a.rows() && c0 + b.cols() <= a.cols(),
          "set_block: out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    std::memcpy(a.row(r0 + i) + c0, b.row(i), b.cols() * sizeof(double));
}

Matrix column(const Matrix& a, std::size_t j) {
  require(j < a.cols(), "column: out of range");
  Matrix c(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) c(i, 0) = a(i, j);
  return c;
}

}  // namespace bwrank
