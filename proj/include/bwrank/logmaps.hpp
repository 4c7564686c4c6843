#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwrank/matkernels.hpp"
#include "bwrank/matrix.hpp"

namespace bwrank::logmaps {

/// SVD parameterization X^T Y = U Σ V^T of the logarithm family between the
/// strata points X X^T and Y Y^T: l = rank(X^T Y), r = k - l, and every
/// logarithm rotation is R = V diag(I_l, R_r) U^T with R_r in O(r).
struct LogIndexParams {
  Matrix u;                   // k×k orthogonal
  std::vector<double> sigma;  // descending
  Matrix v;                   // k×k orthogonal
  std::size_t l;
  std::size_t r;
  Matrix gram;                // X^T Y, kept for certificate checks
  std::vector<std::string> warnings;  // borderline-threshold diagnostics
};

struct LogRankResult {
  std::size_t l;
  std::size_t r;
  std::vector<double> angles;  // principal angles between span(X), span(Y)
  std::vector<std::string> warnings;
};

/// l = numerical rank of X^T Y and r = k - l, cross-checked against the
/// count of orthogonal principal angles between the spans. A mismatch
/// between the two computations is an error, not silently resolved.
LogRankResult log_rank(const Matrix& x, const Matrix& y,
                       double rank_tol = matkernels::kRankTol,
                       double angle_cos_tol = matkernels::kAngleCosTol);

LogIndexParams log_index_params(const Matrix& x, const Matrix& y,
                                double rank_tol = matkernels::kRankTol);

/// R = V diag(I_l, R_r) U^T, verified against the membership certificate
/// ||X^T Y R - (X^T Y Y^T X)^{1/2}||_F <= 1e-8 (1 + sigma_max).
Matrix build_log_rotation(const LogIndexParams& p, const Matrix& rr);

/// One certified rotation per (seed, det sign) draw of R_r, bitwise
/// duplicates removed; the singleton V U^T when r = 0.
std::vector<Matrix> sample_log_family(const LogIndexParams& p,
                                      const std::vector<std::uint64_t>& seeds);

/// Recover R_r from a family member: the lower-right r×r block of V^T R U.
Matrix extract_rr(const LogIndexParams& p, const Matrix& rotation);

}  // namespace bwrank::logmaps
