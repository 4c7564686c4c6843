#pragma once

#include <cstdint>
#include <vector>

#include "bwrank/matrix.hpp"

namespace bwrank::matkernels {

/// Relative numerical-rank threshold shared across the library (overridable
/// per call where it matters).
inline constexpr double kRankTol = 1e-10;

/// Cosine cutoff deciding "this principal angle is pi/2".
inline constexpr double kAngleCosTol = 1e-8;

/// Admissible floor for the smallest eigenvalue of a positive definite
/// matrix: dim * machine epsilon * lambda_max.
double spd_eig_floor(std::size_t dim, double lambda_max);

/// Symmetric matrix; symmetrized on construction, A <- (A + A^T)/2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& a);
  static SymMatrix zero(std::size_t k);
  static SymMatrix identity(std::size_t k);

  std::size_t dim() const { return m_.rows(); }
  const Matrix& entries() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Symmetric positive definite matrix; construction rejects any eigenvalue
/// at or below the spd_eig_floor and reports the offending eigenvalue.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& a);
  explicit SpdMatrix(const SymMatrix& a);

  std::size_t dim() const { return s_.dim(); }
  const Matrix& entries() const { return s_.entries(); }
  const SymMatrix& sym() const { return s_; }
  double operator()(std::size_t i, std::size_t j) const { return s_(i, j); }

 private:
  SymMatrix s_;
};

/// Eigendecomposition with values ascending and a deterministic per-column
/// sign convention: the entry of largest magnitude in each eigenvector is
/// positive (ties: lowest row index wins).
struct EigenPair {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns matched to values
};

struct ThinSvd {
  Matrix u;                   // n×k, column-orthonormal
  std::vector<double> sigma;  // descending, nonnegative
  Matrix v;                   // k×k orthogonal
};

/// Full QR via Householder reflections: a = q * r with q (n×n) orthogonal
/// and r (n×k) upper triangular.
struct QrFull {
  Matrix q;
  Matrix r;
};

EigenPair sym_eig(const SymMatrix& a);

/// Unique symmetric solution of D S + S D = T. Diagonalizes D = V Λ V^T and
/// divides the rotated right-hand side entrywise by λ_i + λ_j.
SymMatrix sylvester_solve(const SpdMatrix& d, const SymMatrix& t);
/// Same on raw symmetric storage (the ODE state carries D unwrapped);
/// positivity of d is checked against the spd floor.
Matrix sylvester_solve_raw(const Matrix& d, const Matrix& t);

/// PSD square root. Eigenvalues in [-tol, tol] with tol = 1e-10·|λ|max are
/// clamped to zero; anything below -tol is rejected.
SymMatrix psd_sqrt(const SymMatrix& a);

ThinSvd thin_svd(const Matrix& a);  // requires rows >= cols

/// Haar-style orthogonal sample with prescribed determinant sign (+1 or -1),
/// deterministic in the seed. r = 0 yields the empty matrix.
Matrix random_orthogonal(std::size_t r, std::uint64_t seed, int det_sign);

QrFull householder_qr(const Matrix& a);

/// Orthonormal completion: columns spanning the orthogonal complement of
/// span(q), with the deterministic sign convention applied.
Matrix complete_frame(const Matrix& q);

/// Inverse of an SPD matrix through its eigendecomposition.
Matrix spd_inverse_raw(const Matrix& d);

/// Square linear solve with partial pivoting (b may have several columns).
Matrix lu_solve(Matrix a, Matrix b);

/// Sign of det(a) in {-1, 0, +1} via pivoted LU.
int det_sign(Matrix a);

/// max |eigenvalue| helper used by clamp thresholds.
double max_abs_eig(const EigenPair& e);

}  // namespace bwrank::matkernels
