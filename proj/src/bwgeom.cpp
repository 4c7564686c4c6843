#include "bwrank/bwgeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwrank/errors.hpp"

namespace bwrank::bwgeom {

namespace {

using matkernels::EigenPair;
using matkernels::sym_eig;

struct EigFactor {
  Matrix q;      // n×rank, descending eigenvalues
  Matrix d;      // rank×rank diagonal
  std::size_t rank;
};

/// Validates PSD-ness and extracts the descending top-rank eigenpairs.
EigFactor psd_eig_factor(const Matrix& sigma, double rank_tol) {
  const SymMatrix sym(sigma);
  const EigenPair e = sym_eig(sym);
  const std::size_t n = sym.dim();
  const double lam_max = e.values.empty() ? 0.0 : e.values.back();
  if (!e.values.empty() && e.values.front() < -1e-10 * std::max(lam_max, 0.0))
    throw NotPositiveDefinite(
        "psd matrix expected: eigenvalue " + std::to_string(e.values.front()),
        e.values.front());
  const double cut = rank_tol * std::max(lam_max, 0.0);
  std::size_t rank = 0;
  for (double v : e.values)
    if (v > cut) ++rank;

  EigFactor f;
  f.rank = rank;
  f.q = Matrix(n, rank);
  f.d = Matrix(rank, rank);
  for (std::size_t j = 0; j < rank; ++j) {
    const std::size_t src = n - 1 - j;  // ascending -> descending
    f.d(j, j) = e.values[src];
    for (std::size_t i = 0; i < n; ++i) f.q(i, j) = e.vectors(i, src);
  }
  return f;
}

Matrix dphi_matrix(const BundlePoint& p, const Matrix& b, const Matrix& t) {
  const Matrix& q = p.q();
  const Matrix& qp = p.qperp();
  const Matrix& d = p.d().entries();
  const Matrix qbd = matmul(qp, matmul(b, d));      // Q_perp B D
  const Matrix horizontal = matmul_nt(qbd, q);      // Q_perp B D Q^T
  const Matrix vertical = matmul(q, matmul_nt(t, q));
  return symmetrize(horizontal + transpose(horizontal) + vertical);
}

}  // namespace

PsdFixedRank::PsdFixedRank(Matrix sigma, StiefelPoint q, SpdMatrix d)
    : sigma_(std::move(sigma)), q_(std::move(q)), d_(std::move(d)) {}

PsdFixedRank PsdFixedRank::from_matrix(const Matrix& sigma, std::size_t k,
                                       double rank_tol) {
  if (k == 0) throw DimensionError("PsdFixedRank: k must be positive");
  const EigFactor f = psd_eig_factor(sigma, rank_tol);
  if (f.rank != k)
    throw RankError("PsdFixedRank: numerical rank " + std::to_string(f.rank) +
                        ", expected " + std::to_string(k),
                    k, f.rank);
  return PsdFixedRank(symmetrize(sigma), StiefelPoint(f.q), SpdMatrix(f.d));
}

PsdFixedRank PsdFixedRank::from_factor(const StiefelPoint& q, const SpdMatrix& d) {
  if (q.k() != d.dim()) throw DimensionError("PsdFixedRank: factor shape mismatch");
  Matrix sigma = symmetrize(matmul(q.q(), matmul_nt(d.entries(), q.q())));
  return PsdFixedRank(std::move(sigma), q, d);
}

AmbientTangent::AmbientTangent(const Matrix& v) : v_(symmetrize(v)) {
  if (!all_finite(v_)) throw std::invalid_argument("AmbientTangent: non-finite entries");
}

double tangency_residual(const PsdFixedRank& s, const AmbientTangent& v) {
  // P_perp V P_perp with P_perp = I - Q Q^T
  const Matrix& q = s.q().q();
  const Matrix qtv = matmul_tn(q, v.v());            // Q^T V
  const Matrix pv = v.v() - matmul(q, qtv);          // P_perp V
  const Matrix pvq = matmul(pv, q);                  // (P_perp V) Q
  const Matrix pvp = pv - matmul_nt(pvq, q);         // P_perp V P_perp
  return frob_norm(pvp);
}

namespace {
void check_tangency(const PsdFixedRank& s, const AmbientTangent& v, const char* op) {
  const double res = tangency_residual(s, v);
  const double tol = 1e-8 * std::max(1.0, frob_norm(v.v()));
  if (res > tol)
    throw TangencyError(std::string(op) + ": P_perp V P_perp residual " +
                            std::to_string(res) + " exceeds tolerance",
                        res);
}
}  // namespace

PsdFixedRank phi(const BundlePoint& p) {
  return PsdFixedRank::from_factor(StiefelPoint(p.q()), p.d());
}

BundlePoint phi_inv(const PsdFixedRank& s, double rank_tol) {
  const EigFactor f = psd_eig_factor(s.sigma(), rank_tol);
  if (f.rank != s.k())
    throw RankError("phi_inv: numerical rank " + std::to_string(f.rank) +
                        ", expected " + std::to_string(s.k()),
                    s.k(), f.rank);
  return BundlePoint(Frame(StiefelPoint(f.q)), SpdMatrix(f.d));
}

AmbientTangent dphi(const BundlePoint& p, const BundleTangent& w) {
  if (w.b.rows() != p.n() - p.k() || w.b.cols() != p.k() || w.t.dim() != p.k())
    throw DimensionError("dphi: tangent shape mismatch");
  return AmbientTangent(dphi_matrix(p, w.b, w.t.entries()));
}

AmbientTangent dphi_raw(const BundlePoint& p, const Matrix& v_stiefel,
                        const SymMatrix& t) {
  if (v_stiefel.rows() != p.n() || v_stiefel.cols() != p.k() || t.dim() != p.k())
    throw DimensionError("dphi_raw: shape mismatch");
  const Matrix& q = p.q();
  const Matrix& d = p.d().entries();
  const Matrix vd = matmul(v_stiefel, d);
  const Matrix vdq = matmul_nt(vd, q);  // V D Q^T
  const Matrix vertical = matmul(q, matmul_nt(t.entries(), q));
  return AmbientTangent(symmetrize(vdq + transpose(vdq) + vertical));
}

BundleTangent dphi_inv(const BundlePoint& p, const AmbientTangent& v) {
  const PsdFixedRank s = phi(p);
  check_tangency(s, v, "dphi_inv");
  const Matrix& q = p.q();
  const Matrix vq = matmul(v.v(), q);                       // V Q
  const Matrix t = matmul_tn(q, vq);                        // Q^T V Q
  const Matrix dinv = matkernels::spd_inverse_raw(p.d().entries());
  const Matrix b = matmul(matmul_tn(p.qperp(), vq), dinv);  // Q_perp^T V Q D^{-1}
  return BundleTangent(b, SymMatrix(t));
}

double ambient_metric(const PsdFixedRank& s, const AmbientTangent& v,
                      const AmbientTangent& w) {
  if (v.n() != s.n() || w.n() != s.n())
    throw DimensionError("ambient_metric: dimension mismatch");
  check_tangency(s, v, "ambient_metric");
  check_tangency(s, w, "ambient_metric");

  const Matrix& q = s.q().q();
  const Matrix& d = s.d().entries();
  const std::size_t n = s.n();

  // S_{Sigma,V} = Q S_D(Q^T V Q) Q^T, as full n×n matrices
  const auto sylvester_lift = [&](const AmbientTangent& a) {
    const Matrix core = matkernels::sylvester_solve_raw(
        d, matmul_tn(q, matmul(a.v(), q)));
    return matmul(q, matmul_nt(core, q));
  };
  const Matrix sv = sylvester_lift(v);
  const Matrix sw = sylvester_lift(w);
  const double vertical_term = trace(matmul(sv, matmul(s.sigma(), sw)));

  Matrix p_perp = Matrix::identity(n) - matmul_nt(q, q);
  const Matrix pinv = matmul(q, matmul_nt(matkernels::spd_inverse_raw(d), q));
  const double horizontal_term =
      trace(matmul(p_perp, matmul(v.v(), matmul(pinv, w.v()))));

  return vertical_term + horizontal_term;
}

double bundle_metric(const BundlePoint& p, const BundleTangent& w1,
                     const BundleTangent& w2) {
  if (w1.b.rows() != w2.b.rows() || w1.t.dim() != w2.t.dim() ||
      w1.t.dim() != p.k())
    throw DimensionError("bundle_metric: dimension mismatch");
  const Matrix& d = p.d().entries();
  const Matrix s1 = matkernels::sylvester_solve_raw(d, w1.t.entries());
  const Matrix s2 = matkernels::sylvester_solve_raw(d, w2.t.entries());
  const double horizontal = trace(matmul_nt(matmul(w1.b, d), w2.b));
  const double vertical = trace(matmul(s1, matmul(d, s2)));
  return horizontal + vertical;
}

double bw_distance(const Matrix& sigma1, const Matrix& sigma2) {
  if (sigma1.rows() != sigma2.rows() || sigma1.cols() != sigma2.cols() ||
      sigma1.rows() != sigma1.cols())
    throw DimensionError("bw_distance: dimension mismatch");
  // validate both inputs are PSD before touching square roots
  (void)psd_eig_factor(sigma1, matkernels::kRankTol);
  (void)psd_eig_factor(sigma2, matkernels::kRankTol);

  const SymMatrix root1 = matkernels::psd_sqrt(SymMatrix(sigma1));
  const Matrix inner =
      matmul(root1.entries(), matmul(sigma2, root1.entries()));
  const SymMatrix cross = matkernels::psd_sqrt(SymMatrix(inner));
  const double d2 = trace(sigma1) + trace(sigma2) - 2.0 * trace(cross.entries());
  return std::sqrt(std::max(0.0, d2));
}

double bw_distance(const PsdFixedRank& s1, const PsdFixedRank& s2) {
  return bw_distance(s1.sigma(), s2.sigma());
}

double nuclear_norm(const Matrix& a) {
  const Matrix m = (a.rows() >= a.cols()) ? a : transpose(a);
  const matkernels::ThinSvd svd = matkernels::thin_svd(m);
  double acc = 0.0;
  for (double s : svd.sigma) acc += s;
  return acc;
}

double bw_distance_procrustes(const Matrix& x, const Matrix& y, double rank_tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("bw_distance_procrustes: shape mismatch");
  const auto check_rank = [&](const Matrix& m, const char* which) {
    const matkernels::ThinSvd svd = matkernels::thin_svd(m);
    if (svd.sigma.empty() || svd.sigma.back() <= rank_tol * svd.sigma.front())
      throw RankError(std::string("bw_distance_procrustes: ") + which +
                          " not full column rank",
                      m.cols(), m.cols() - 1);
  };
  check_rank(x, "X");
  check_rank(y, "Y");
  const double d2 =
      frob_norm_sq(x) + frob_norm_sq(y) - 2.0 * nuclear_norm(matmul_tn(y, x));
  return std::sqrt(std::max(0.0, d2));
}

PsdFactor psd_rank_factor(const Matrix& sigma, double rank_tol) {
  const EigFactor f = psd_eig_factor(sigma, rank_tol);
  PsdFactor out;
  out.rank = f.rank;
  out.x = f.q;
  for (std::size_t j = 0; j < f.rank; ++j) {
    const double root = std::sqrt(f.d(j, j));
    for (std::size_t i = 0; i < out.x.rows(); ++i) out.x(i, j) *= root;
  }
  return out;
}

}  // namespace bwrank::bwgeom
