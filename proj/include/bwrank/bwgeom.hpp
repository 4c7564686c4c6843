#pragma once

#include <cstddef>
#include <vector>

#include "bwrank/manifolds.hpp"
#include "bwrank/matkernels.hpp"
#include "bwrank/matrix.hpp"

namespace bwrank::bwgeom {

using manifolds::BundlePoint;
using manifolds::BundleTangent;
using manifolds::Frame;
using manifolds::StiefelPoint;
using matkernels::SpdMatrix;
using matkernels::SymMatrix;

/// Rank-k PSD matrix with a cached factorization Sigma = Q D Q^T.
class PsdFixedRank {
 public:
  /// Validates symmetry, positive semidefiniteness and numerical rank
  /// exactly k (threshold rank_tol * lambda_max); the cached factor comes
  /// from the top-k eigenpairs, descending, with deterministic signs.
  static PsdFixedRank from_matrix(const Matrix& sigma, std::size_t k,
                                  double rank_tol = matkernels::kRankTol);
  /// Builds Sigma = Q D Q^T from an explicit factor.
  static PsdFixedRank from_factor(const StiefelPoint& q, const SpdMatrix& d);

  std::size_t n() const { return sigma_.rows(); }
  std::size_t k() const { return q_.k(); }
  const Matrix& sigma() const { return sigma_; }
  const StiefelPoint& q() const { return q_; }
  const SpdMatrix& d() const { return d_; }

 private:
  PsdFixedRank(Matrix sigma, StiefelPoint q, SpdMatrix d);
  Matrix sigma_;
  StiefelPoint q_;
  SpdMatrix d_;
};

/// Element of T_Sigma: a symmetric matrix V with P_perp V P_perp = 0 for
/// the Sigma it is used with (checked by the operations).
class AmbientTangent {
 public:
  explicit AmbientTangent(const Matrix& v);
  const Matrix& v() const { return v_; }
  std::size_t n() const { return v_.rows(); }

 private:
  Matrix v_;
};

/// Residual of the tangency condition ||P_perp V P_perp||_F (absolute).
double tangency_residual(const PsdFixedRank& s, const AmbientTangent& v);

/// phi([Q, D]) = Q D Q^T.
PsdFixedRank phi(const BundlePoint& p);

/// Inverse via the top-k eigenpairs of Sigma; rejects rank != k.
BundlePoint phi_inv(const PsdFixedRank& s, double rank_tol = matkernels::kRankTol);

/// d phi in bundle coordinates: Q_perp B D Q^T + Q D B^T Q_perp^T + Q T Q^T.
AmbientTangent dphi(const BundlePoint& p, const BundleTangent& w);

/// d phi on a full Stiefel tangent V (not assumed horizontal):
/// V D Q^T + Q D V^T + Q T Q^T. Gauge directions (QA, DA - AD) map to zero.
AmbientTangent dphi_raw(const BundlePoint& p, const Matrix& v_stiefel,
                        const SymMatrix& t);

/// Blockwise inverse of dphi: T = Q^T V Q, B = Q_perp^T V Q D^{-1}.
BundleTangent dphi_inv(const BundlePoint& p, const AmbientTangent& v);

/// The Bures-Wasserstein metric on T_Sigma, evaluated through the cached
/// factor: Tr(S_{Sigma,V} Sigma S_{Sigma,W}) + Tr(P_perp V Sigma^+ W).
double ambient_metric(const PsdFixedRank& s, const AmbientTangent& v,
                      const AmbientTangent& w);

/// Pullback metric in bundle coordinates:
/// Tr(B1 D B2^T) + Tr(S_D(T1) D S_D(T2)).
double bundle_metric(const BundlePoint& p, const BundleTangent& w1,
                     const BundleTangent& w2);

/// d^BW via the trace formula; accepts any PSD inputs (rank-agnostic).
double bw_distance(const Matrix& sigma1, const Matrix& sigma2);
double bw_distance(const PsdFixedRank& s1, const PsdFixedRank& s2);

/// Independent oracle: min over O(k) of ||X - Y R||_F in closed form from
/// the SVD of Y^T X. Requires full column rank.
double bw_distance_procrustes(const Matrix& x, const Matrix& y,
                              double rank_tol = matkernels::kRankTol);

/// Sum of singular values (any shape).
double nuclear_norm(const Matrix& a);

/// Rank factor X (n×r, descending eigenvalues) with Sigma = X X^T, plus the
/// computed numerical rank. Rejects non-PSD input.
struct PsdFactor {
  Matrix x;
  std::size_t rank;
};
PsdFactor psd_rank_factor(const Matrix& sigma, double rank_tol = matkernels::kRankTol);

}  // namespace bwrank::bwgeom
