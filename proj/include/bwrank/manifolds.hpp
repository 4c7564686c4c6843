#pragma once

#include <utility>
#include <vector>

#include "bwrank/matkernels.hpp"
#include "bwrank/matrix.hpp"

namespace bwrank::manifolds {

using matkernels::SpdMatrix;
using matkernels::SymMatrix;

/// Point on St(n,k): an n×k matrix with orthonormal columns.
class StiefelPoint {
 public:
  explicit StiefelPoint(const Matrix& q);

  std::size_t n() const { return q_.rows(); }
  std::size_t k() const { return q_.cols(); }
  const Matrix& q() const { return q_; }

 private:
  Matrix q_;
};

/// A Stiefel point together with an orthonormal completion Q_perp, so that
/// [Q Q_perp] is orthogonal. Q_perp is materialized because the geodesic
/// system evolves it alongside Q.
class Frame {
 public:
  explicit Frame(const StiefelPoint& q);          // completes deterministically
  Frame(const StiefelPoint& q, const Matrix& qperp);  // validates the pair

  const StiefelPoint& point() const { return q_; }
  const Matrix& q() const { return q_.q(); }
  const Matrix& qperp() const { return qperp_; }
  std::size_t n() const { return q_.n(); }
  std::size_t k() const { return q_.k(); }

  Matrix full() const { return hcat(q(), qperp_); }  // [Q Q_perp]

 private:
  StiefelPoint q_;
  Matrix qperp_;
};

/// Tangent coordinates at a framed Stiefel point: V = Q A + Q_perp B with A
/// skew (stored skew exactly) and B free.
struct StiefelTangent {
  StiefelTangent(const Matrix& a_in, const Matrix& b_in);
  Matrix a;  // k×k skew
  Matrix b;  // (n-k)×k

  Matrix to_ambient(const Frame& f) const;  // Q A + Q_perp B
};

/// Subspace of R^n with a representative basis and its projector QQ^T
/// (the basis-free equality witness).
class GrassmannPoint {
 public:
  explicit GrassmannPoint(const StiefelPoint& basis);

  const StiefelPoint& basis() const { return basis_; }
  const Matrix& projector() const { return projector_; }
  std::size_t n() const { return basis_.n(); }
  std::size_t k() const { return basis_.k(); }

 private:
  StiefelPoint basis_;
  Matrix projector_;
};

/// Representative (Q, D) of a class [Q, D] in the associated bundle
/// M(n,k) = St(n,k) ×_{O(k)} Sym+(k). Class equality is tested through the
/// image Q D Q^T, never by canonicalizing representatives.
class BundlePoint {
 public:
  BundlePoint(const Frame& frame, const SpdMatrix& d);

  const Frame& frame() const { return frame_; }
  const Matrix& q() const { return frame_.q(); }
  const Matrix& qperp() const { return frame_.qperp(); }
  const SpdMatrix& d() const { return d_; }
  std::size_t n() const { return frame_.n(); }
  std::size_t k() const { return frame_.k(); }

  Matrix sigma() const;  // Q D Q^T

 private:
  Frame frame_;
  SpdMatrix d_;
};

/// Tangent class representative (Q_perp B, T): horizontal coordinate B and
/// vertical coordinate T.
struct BundleTangent {
  BundleTangent(const Matrix& b_in, const SymMatrix& t_in);
  Matrix b;     // (n-k)×k
  SymMatrix t;  // k×k
};

/// Split a Stiefel tangent V into (A, B) coordinates of the given frame.
/// Requires the tangency residual ||Q^T V + V^T Q|| <= 1e-8 (relative).
StiefelTangent stiefel_split(const Frame& f, const Matrix& v);

/// Differential of the projection St(n,k) -> Gr(k,n) in frame coordinates:
/// the B-block of the split. Vertical vectors map to zero.
Matrix grassmann_dpi(const Frame& f, const Matrix& v);

/// Principal angles between span(Q1) and span(Q2), ascending in [0, pi/2],
/// computed as arccos of the singular values of Q1^T Q2 clamped to [0, 1].
std::vector<double> principal_angles(const StiefelPoint& q1, const StiefelPoint& q2);

/// Number of angles whose cosine is at or below cos_tol (the "orthogonal"
/// principal angles of the logarithm count).
std::size_t orthogonal_count(const std::vector<double>& angles,
                             double cos_tol = matkernels::kAngleCosTol);

/// Fiber chart psi^{-1} at base point Q0: [Q, S] -> (Q0^T Q) S (Q0^T Q)^T.
/// Requires span(Q) = span(Q0) within angle tolerance.
SpdMatrix fiber_chart(const StiefelPoint& q0, const BundlePoint& p,
                      double angle_tol = 1e-8);

/// Right O(k) action on representatives: point (QG, G^T D G) with the frame
/// completion unchanged, tangent (BG, G^T T G).
std::pair<BundlePoint, BundleTangent> group_act(const Matrix& g,
                                                const BundlePoint& p,
                                                const BundleTangent& w);
BundlePoint group_act(const Matrix& g, const BundlePoint& p);

/// Class equality through the bundle-to-matrix image (relative Frobenius).
bool same_class(const BundlePoint& p1, const BundlePoint& p2, double tol = 1e-9);

}  // namespace bwrank::manifolds
