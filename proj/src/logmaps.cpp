#include "bwrank/logmaps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwrank/errors.hpp"
#include "bwrank/manifolds.hpp"

namespace bwrank::logmaps {

namespace {

using matkernels::ThinSvd;

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

void check_full_rank(const Matrix& m, double rank_tol, const char* which) {
  const ThinSvd svd = matkernels::thin_svd(m);
  if (svd.sigma.empty() || svd.sigma.back() <= rank_tol * svd.sigma.front())
    throw RankError(std::string("logmaps: ") + which + " not full column rank",
                    m.cols(), m.cols() > 0 ? m.cols() - 1 : 0);
}

/// Orthonormal basis of the column span (first k columns of the full QR).
Matrix span_basis(const Matrix& m) {
  const matkernels::QrFull f = matkernels::householder_qr(m);
  return block(f.q, 0, 0, m.rows(), m.cols());
}

}  // namespace

LogRankResult log_rank(const Matrix& x, const Matrix& y, double rank_tol,
                       double angle_cos_tol) {
  require(x.rows() == y.rows() && x.cols() == y.cols() && x.rows() >= x.cols(),
          "log_rank: factors must share an n×k shape with n >= k");
  check_full_rank(x, rank_tol, "X");
  check_full_rank(y, rank_tol, "Y");
  const std::size_t k = x.cols();

  const ThinSvd svd = matkernels::thin_svd(matmul_tn(x, y));
  const double sig_max = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  std::size_t l = 0;
  for (double s : svd.sigma)
    if (s > rank_tol * sig_max) ++l;

  LogRankResult out;
  out.l = l;
  out.r = k - l;
  out.angles = manifolds::principal_angles(
      manifolds::StiefelPoint(span_basis(x)), manifolds::StiefelPoint(span_basis(y)));

  for (std::size_t i = 0; i < out.angles.size(); ++i) {
    const double c = std::cos(out.angles[i]);
    if (c > angle_cos_tol && c <= 10.0 * angle_cos_tol)
      out.warnings.push_back("principal angle " + std::to_string(i) +
                             " is borderline: cosine " + std::to_string(c) +
                             " within 10x of the orthogonality threshold");
  }

  const std::size_t r_angles = manifolds::orthogonal_count(out.angles, angle_cos_tol);
  if (r_angles != out.r)
    throw std::runtime_error(
        "log_rank: inconsistent multiplicity counts (rank-based r = " +
        std::to_string(out.r) + ", principal-angle count = " +
        std::to_string(r_angles) + "); input straddles the thresholds");
  return out;
}

LogIndexParams log_index_params(const Matrix& x, const Matrix& y, double rank_tol) {
  require(x.rows() == y.rows() && x.cols() == y.cols() && x.rows() >= x.cols(),
          "log_index_params: factors must share an n×k shape with n >= k");
  check_full_rank(x, rank_tol, "X");
  check_full_rank(y, rank_tol, "Y");
  const std::size_t k = x.cols();

  LogIndexParams p;
  p.gram = matmul_tn(x, y);
  ThinSvd svd = matkernels::thin_svd(p.gram);
  p.u = std::move(svd.u);
  p.v = std::move(svd.v);
  p.sigma = std::move(svd.sigma);
  const double sig_max = p.sigma.empty() ? 0.0 : p.sigma.front();
  p.l = 0;
  for (double s : p.sigma)
    if (s > rank_tol * sig_max) ++p.l;
  p.r = k - p.l;
  for (std::size_t i = 0; i < p.sigma.size(); ++i)
    if (p.sigma[i] > rank_tol * sig_max && p.sigma[i] <= 10.0 * rank_tol * sig_max)
      p.warnings.push_back("singular value " + std::to_string(i) +
                           " is borderline: " + std::to_string(p.sigma[i]) +
                           " within 10x of the rank threshold");
  return p;
}

Matrix build_log_rotation(const LogIndexParams& p, const Matrix& rr) {
  const std::size_t k = p.u.rows();
  require(rr.rows() == p.r && rr.cols() == p.r,
          "build_log_rotation: R_r must be r×r");
  if (p.r > 0) {
    Matrix g = matmul_tn(rr, rr);
    for (std::size_t i = 0; i < p.r; ++i) g(i, i) -= 1.0;
    if (frob_norm(g) > 1e-10)
      throw std::invalid_argument("build_log_rotation: R_r not orthogonal");
  }

  Matrix blockdiag = Matrix::identity(k);
  for (std::size_t i = 0; i < p.r; ++i)
    for (std::size_t j = 0; j < p.r; ++j)
      blockdiag(p.l + i, p.l + j) = rr(i, j);
  const Matrix rotation = matmul(p.v, matmul_nt(blockdiag, p.u));

  // membership certificate: X^T Y R = (X^T Y Y^T X)^{1/2}
  const Matrix lhs = matmul(p.gram, rotation);
  const Matrix rhs =
      matkernels::psd_sqrt(matkernels::SymMatrix(matmul_nt(p.gram, p.gram)))
          .entries();
  const double sig_max = p.sigma.empty() ? 0.0 : p.sigma.front();
  const double residual = frob_norm(lhs - rhs);
  if (residual > 1e-8 * (1.0 + sig_max))
    throw CertificateError(
        "build_log_rotation: certificate residual " + std::to_string(residual) +
            " exceeds 1e-8*(1+sigma_max)",
        residual);
  return rotation;
}

std::vector<Matrix> sample_log_family(const LogIndexParams& p,
                                      const std::vector<std::uint64_t>& seeds) {
  std::vector<Matrix> family;
  if (p.r == 0) {
    family.push_back(build_log_rotation(p, Matrix(0, 0)));
    return family;
  }
  for (std::uint64_t seed : seeds) {
    for (int sign : {+1, -1}) {
      const Matrix rr = matkernels::random_orthogonal(p.r, seed, sign);
      Matrix rot = build_log_rotation(p, rr);
      const bool dup = std::any_of(family.begin(), family.end(),
                                   [&](const Matrix& m) { return m == rot; });
      if (!dup) family.push_back(std::move(rot));
    }
  }
  return family;
}

Matrix extract_rr(const LogIndexParams& p, const Matrix& rotation) {
  require(rotation.rows() == p.u.rows() && rotation.cols() == p.u.rows(),
          "extract_rr: rotation must be k×k");
  const Matrix inner = matmul_tn(p.v, matmul(rotation, p.u));  // V^T R U
  return block(inner, p.l, p.l, p.r, p.r);
}

}  // namespace bwrank::logmaps
