#include "bwrank/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwrank/errors.hpp"

namespace bwrank::manifolds {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

double orthogonality_residual(const Matrix& m) {
  Matrix g = matmul_tn(m, m);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frob_norm(g);
}

}  // namespace

StiefelPoint::StiefelPoint(const Matrix& q) : q_(q) {
  require(q.rows() >= q.cols() && q.cols() > 0, "StiefelPoint: need n >= k >= 1");
  if (!all_finite(q)) throw std::invalid_argument("StiefelPoint: non-finite entries");
  const double res = orthogonality_residual(q);
  if (res > 1e-10)
    throw std::invalid_argument("StiefelPoint: columns not orthonormal, residual " +
                                std::to_string(res));
}

Frame::Frame(const StiefelPoint& q)
    : q_(q), qperp_(matkernels::complete_frame(q.q())) {}

Frame::Frame(const StiefelPoint& q, const Matrix& qperp) : q_(q), qperp_(qperp) {
  require(qperp.rows() == q.n() && qperp.cols() == q.n() - q.k(),
          "Frame: completion has wrong shape");
  const double res = orthogonality_residual(hcat(q.q(), qperp));
  if (res > 1e-10)
    throw std::invalid_argument("Frame: [Q Qperp] not orthogonal, residual " +
                                std::to_string(res));
}

StiefelTangent::StiefelTangent(const Matrix& a_in, const Matrix& b_in)
    : a(a_in.rows(), a_in.cols()), b(b_in) {
  require(a_in.rows() == a_in.cols(), "StiefelTangent: A not square");
  require(b_in.cols() == a_in.rows(), "StiefelTangent: B column count mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      a(i, j) = 0.5 * (a_in(i, j) - a_in(j, i));
}

Matrix StiefelTangent::to_ambient(const Frame& f) const {
  return matmul(f.q(), a) + matmul(f.qperp(), b);
}

GrassmannPoint::GrassmannPoint(const StiefelPoint& basis)
    : basis_(basis), projector_(matmul_nt(basis.q(), basis.q())) {}

BundlePoint::BundlePoint(const Frame& frame, const SpdMatrix& d)
    : frame_(frame), d_(d) {
  require(frame.k() == d.dim(), "BundlePoint: D dimension mismatch");
}

Matrix BundlePoint::sigma() const {
  return symmetrize(matmul(q(), matmul_nt(d_.entries(), q())));
}

BundleTangent::BundleTangent(const Matrix& b_in, const SymMatrix& t_in)
    : b(b_in), t(t_in) {
  require(b_in.cols() == t_in.dim(), "BundleTangent: B/T dimension mismatch");
}

StiefelTangent stiefel_split(const Frame& f, const Matrix& v) {
  require(v.rows() == f.n() && v.cols() == f.k(), "stiefel_split: shape mismatch");
  const Matrix qtv = matmul_tn(f.q(), v);
  const double res = frob_norm(qtv + transpose(qtv));
  const double tol = 1e-8 * std::max(1.0, frob_norm(v));
  if (res > tol)
    throw TangencyError("stiefel_split: Q^T V + V^T Q residual " +
                            std::to_string(res) + " exceeds tolerance",
                        res);
  return StiefelTangent(qtv, matmul_tn(f.qperp(), v));
}

Matrix grassmann_dpi(const Frame& f, const Matrix& v) {
  return stiefel_split(f, v).b;
}

std::vector<double> principal_angles(const StiefelPoint& q1, const StiefelPoint& q2) {
  require(q1.n() == q2.n() && q1.k() == q2.k(),
          "principal_angles: dimension mismatch");
  const std::size_t k = q1.k();
  const Matrix overlap = matmul_tn(q1.q(), q2.q());
  const matkernels::ThinSvd cos_svd = matkernels::thin_svd(overlap);
  // sine route for the small angles, where arccos of a cosine near 1 loses
  // half the digits: singular values of (I - Q1 Q1^T) Q2 are the sines
  const Matrix residual = q2.q() - matmul(q1.q(), overlap);
  const matkernels::ThinSvd sin_svd = matkernels::thin_svd(residual);
  std::vector<double> angles(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double c = std::clamp(cos_svd.sigma[i], 0.0, 1.0);
    if (c * c >= 0.5) {
      // cosines descend, sines ascend: same angle sits at the mirrored index
      angles[i] = std::asin(std::clamp(sin_svd.sigma[k - 1 - i], 0.0, 1.0));
    } else {
      angles[i] = std::acos(c);
    }
  }
  return angles;  // ascending
}

std::size_t orthogonal_count(const std::vector<double>& angles, double cos_tol) {
  std::size_t c = 0;
  for (double a : angles)
    if (std::cos(a) <= cos_tol) ++c;
  return c;
}

SpdMatrix fiber_chart(const StiefelPoint& q0, const BundlePoint& p,
                      double angle_tol) {
  require(q0.n() == p.n() && q0.k() == p.k(), "fiber_chart: dimension mismatch");
  // sin of the largest principal angle: ||(I - Q0 Q0^T) Q||_2
  const Matrix overlap = matmul_tn(q0.q(), p.q());
  const Matrix residual = p.q() - matmul(q0.q(), overlap);
  const matkernels::ThinSvd svd = matkernels::thin_svd(residual);
  const double sin_max = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  if (sin_max > angle_tol)
    throw std::domain_error(
        "fiber_chart: spans differ, sin(largest principal angle) = " +
        std::to_string(sin_max));
  // (Q0^T Q) S (Q0^T Q)^T maps the stored representative into the chart at
  // Q0 and is invariant under representative changes [QG, G^T S G]
  return SpdMatrix(matmul(overlap, matmul_nt(p.d().entries(), overlap)));
}

std::pair<BundlePoint, BundleTangent> group_act(const Matrix& g,
                                                const BundlePoint& p,
                                                const BundleTangent& w) {
  require(g.rows() == p.k() && g.cols() == p.k(), "group_act: G dimension mismatch");
  const double res = orthogonality_residual(g);
  if (res > 1e-10)
    throw std::invalid_argument("group_act: G not orthogonal, residual " +
                                std::to_string(res));
  const Matrix gt_d_g = matmul_tn(g, matmul(p.d().entries(), g));
  BundlePoint moved(Frame(StiefelPoint(matmul(p.q(), g)), p.qperp()),
                    SpdMatrix(gt_d_g));
  BundleTangent moved_tangent(
      matmul(w.b, g), SymMatrix(matmul_tn(g, matmul(w.t.entries(), g))));
  return {std::move(moved), std::move(moved_tangent)};
}

BundlePoint group_act(const Matrix& g, const BundlePoint& p) {
  const BundleTangent zero(Matrix(p.n() - p.k(), p.k()), SymMatrix::zero(p.k()));
  return group_act(g, p, zero).first;
}

bool same_class(const BundlePoint& p1, const BundlePoint& p2, double tol) {
  if (p1.n() != p2.n() || p1.k() != p2.k()) return false;
  const Matrix s1 = p1.sigma();
  return frob_norm(s1 - p2.sigma()) <= tol * std::max(1.0, frob_norm(s1));
}

}  // namespace bwrank::manifolds
