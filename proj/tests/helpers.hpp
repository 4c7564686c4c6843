#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bwrank/matrix.hpp"
#include "bwrank/random.hpp"
#include "bwrank/verify.hpp"

namespace testutil {

using bwrank::Matrix;

/// Plain Gaussian elimination, test-only; keeps the oracles below
/// independent of the library's solvers.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
    if (a[piv][col] == 0.0) throw std::runtime_error("gauss_solve: singular");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ip1 = n; ip1 > 0; --ip1) {
    const std::size_t i = ip1 - 1;
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

/// Brute-force Sylvester oracle: solve (I ⊗ D + D ⊗ I) vec(S) = vec(T).
inline Matrix kron_sylvester_oracle(const Matrix& d, const Matrix& t) {
  const std::size_t k = d.rows();
  std::vector<std::vector<double>> a(k * k, std::vector<double>(k * k, 0.0));
  std::vector<double> rhs(k * k);
  // vec is row-major here: index (i,j) -> i*k + j; (D S)_{ij} = sum_l D_il S_lj,
  // (S D)_{ij} = sum_l S_il D_lj
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t row = i * k + j;
      rhs[row] = t(i, j);
      for (std::size_t l = 0; l < k; ++l) {
        a[row][l * k + j] += d(i, l);
        a[row][i * k + l] += d(l, j);
      }
    }
  const std::vector<double> x = gauss_solve(std::move(a), std::move(rhs));
  Matrix s(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) s(i, j) = x[i * k + j];
  return s;
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  return bwrank::max_abs(a - b);
}

inline double ortho_residual(const Matrix& q) {
  Matrix g = bwrank::matmul_tn(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return bwrank::frob_norm(g);
}

}  // namespace testutil
