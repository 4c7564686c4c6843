#include "bwrank/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bwrank/errors.hpp"
#include "bwrank/kernels.hpp"
#include "bwrank/matkernels.hpp"

namespace bwrank::geodesics {

namespace {

using matkernels::EigenPair;
using matkernels::spd_eig_floor;
using matkernels::sym_eig;

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

void check_state_shapes(const GeodesicState& s) {
  const std::size_t n = s.n(), k = s.k();
  require(n >= k && k > 0, "GeodesicState: need n >= k >= 1");
  require(s.qperp.rows() == n && s.qperp.cols() == n - k,
          "GeodesicState: Qperp shape");
  require(s.d.rows() == k && s.d.cols() == k, "GeodesicState: D shape");
  require(s.b.rows() == n - k && s.b.cols() == k, "GeodesicState: B shape");
  require(s.s.rows() == k && s.s.cols() == k, "GeodesicState: S shape");
}

// y = base + a * dir, blockwise
GeodesicState state_add_scaled(const GeodesicState& base, double a,
                               const GeodesicState& dir) {
  GeodesicState out = base;
  kernels::add_scaled(base.q.data(), a, dir.q.data(), out.q.data(), out.q.size());
  kernels::add_scaled(base.qperp.data(), a, dir.qperp.data(), out.qperp.data(),
                      out.qperp.size());
  kernels::add_scaled(base.d.data(), a, dir.d.data(), out.d.data(), out.d.size());
  kernels::add_scaled(base.b.data(), a, dir.b.data(), out.b.data(), out.b.size());
  kernels::add_scaled(base.s.data(), a, dir.s.data(), out.s.data(), out.s.size());
  return out;
}

void state_axpy(double a, const GeodesicState& x, GeodesicState& y) {
  kernels::axpy(a, x.q.data(), y.q.data(), y.q.size());
  kernels::axpy(a, x.qperp.data(), y.qperp.data(), y.qperp.size());
  kernels::axpy(a, x.d.data(), y.d.data(), y.d.size());
  kernels::axpy(a, x.b.data(), y.b.data(), y.b.size());
  kernels::axpy(a, x.s.data(), y.s.data(), y.s.size());
}

double frame_ortho_residual(const GeodesicState& s) {
  const Matrix full = hcat(s.q, s.qperp);
  Matrix g = matmul_tn(full, full);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frob_norm(g);
}

/// Polar projection of the frame onto O(n); returns the correction size.
double reorthogonalize(GeodesicState& s) {
  const std::size_t n = s.n(), k = s.k();
  const Matrix full = hcat(s.q, s.qperp);
  const EigenPair e = sym_eig(matkernels::SymMatrix(matmul_tn(full, full)));
  Matrix vi(n, n);  // V diag(1/sqrt(lambda)) V^T
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      vi(i, j) = e.vectors(i, j) / std::sqrt(e.values[j]);
  const Matrix inv_sqrt = matmul_nt(vi, e.vectors);
  const Matrix polar = matmul(full, inv_sqrt);
  const double correction = frob_norm(polar - full);
  s.q = block(polar, 0, 0, n, k);
  s.qperp = block(polar, 0, k, n, n - k);
  return correction;
}

/// Smallest eigenvalue of D, for positivity monitoring.
void check_d_positive(const GeodesicState& s, double t) {
  const EigenPair e = sym_eig(matkernels::SymMatrix(s.d));
  const double hi = e.values.back();
  if (hi <= 0.0 || e.values.front() <= spd_eig_floor(s.k(), hi))
    throw IntegrationError(
        "integrate: D lost positivity at t = " + std::to_string(t) +
            " (min eigenvalue " + std::to_string(e.values.front()) + ")",
        t);
}

}  // namespace

GeodesicState make_state(const BundlePoint& p, const BundleTangent& w) {
  return make_state_s(
      p, w.b, matkernels::sylvester_solve_raw(p.d().entries(), w.t.entries()));
}

GeodesicState make_state_s(const BundlePoint& p, const Matrix& b0, const Matrix& s0) {
  GeodesicState st{p.q(), p.qperp(), p.d().entries(), b0, symmetrize(s0)};
  check_state_shapes(st);
  return st;
}

GeodesicState act_state(const Matrix& g, const GeodesicState& s) {
  GeodesicState out;
  out.q = matmul(s.q, g);
  out.qperp = s.qperp;
  out.d = matmul_tn(g, matmul(s.d, g));
  out.b = matmul(s.b, g);
  out.s = matmul_tn(g, matmul(s.s, g));
  return out;
}

GeodesicState ode_rhs(const GeodesicState& s) {
  // reject states that have left the cone; integrate() turns this into a
  // timestamped IntegrationError
  const EigenPair e = sym_eig(matkernels::SymMatrix(s.d));
  const double hi = e.values.back();
  if (hi <= 0.0 || e.values.front() <= spd_eig_floor(s.k(), hi))
    throw NotPositiveDefinite("ode_rhs: D not positive definite, min eigenvalue " +
                                  std::to_string(e.values.front()),
                              e.values.front());

  const Matrix ds = matmul(s.d, s.s);
  const Matrix t = ds + transpose(ds);  // D S + S D

  GeodesicState deriv;
  deriv.q = matmul(s.qperp, s.b);
  deriv.qperp = -1.0 * matmul_nt(s.q, s.b);
  deriv.d = t;
  deriv.b = -2.0 * matmul(s.b, s.s);
  deriv.s = matmul_tn(s.b, s.b) - matmul(s.s, s.s);
  return deriv;
}

Matrix momentum(const GeodesicState& s) { return matmul(s.b, s.d); }

double energy(const GeodesicState& s) {
  const double horizontal = trace(matmul_nt(matmul(s.b, s.d), s.b));
  const double vertical = trace(matmul(s.s, matmul(s.d, s.s)));
  return 0.5 * horizontal + 0.5 * vertical;
}

Trajectory integrate(const GeodesicState& s0, double t_max, double dt,
                     Reortho reortho) {
  check_state_shapes(s0);
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (t_max < 0.0) throw std::invalid_argument("integrate: t_max must be >= 0");

  const Matrix k0 = momentum(s0);

  Trajectory traj;
  GeodesicState y = s0;
  check_d_positive(y, 0.0);
  traj.times.push_back(0.0);
  traj.states.push_back(y);
  traj.monitors.push_back(
      {energy(y), 0.0, frame_ortho_residual(y), 0.0});

  const auto steps =
      static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  double t_prev = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t = std::min(static_cast<double>(i) * dt, t_max);
    const double h = t - t_prev;
    t_prev = t;
    try {
      const GeodesicState k1 = ode_rhs(y);
      const GeodesicState k2 = ode_rhs(state_add_scaled(y, 0.5 * h, k1));
      const GeodesicState k3 = ode_rhs(state_add_scaled(y, 0.5 * h, k2));
      const GeodesicState k4 = ode_rhs(state_add_scaled(y, h, k3));
      GeodesicState incr = k1;
      state_axpy(2.0, k2, incr);
      state_axpy(2.0, k3, incr);
      state_axpy(1.0, k4, incr);
      y = state_add_scaled(y, h / 6.0, incr);
    } catch (const NotPositiveDefinite& e) {
      throw IntegrationError(
          "integrate: D lost positivity inside step reaching t = " +
              std::to_string(t) + " (min eigenvalue " +
              std::to_string(e.min_eigenvalue) + ")",
          t);
    }

    double correction = 0.0;
    if (reortho == Reortho::on) correction = reorthogonalize(y);
    check_d_positive(y, t);

    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.monitors.push_back({energy(y), frob_norm(momentum(y) - k0),
                             frame_ortho_residual(y), correction});
  }
  return traj;
}

SpdMatrix vertical_geodesic(const SpdMatrix& d0, const SymMatrix& s0, double t) {
  require(d0.dim() == s0.dim(), "vertical_geodesic: dimension mismatch");
  const EigenPair e = sym_eig(s0);
  double factor_min = 1.0;
  for (double lam : e.values) factor_min = std::min(factor_min, 1.0 + t * lam);
  if (factor_min <= 1e-12) {
    // report the largest admissible |t| in the direction of the request
    double t_adm = std::numeric_limits<double>::infinity();
    for (double lam : e.values) {
      if (t > 0.0 && lam < 0.0) t_adm = std::min(t_adm, -1.0 / lam);
      if (t < 0.0 && lam > 0.0) t_adm = std::min(t_adm, 1.0 / lam);
    }
    throw GeodesicDomainError(
        "vertical_geodesic: I + tS0 not positive definite at t = " +
            std::to_string(t) + ", admissible |t| < " + std::to_string(t_adm),
        t_adm);
  }
  const std::size_t k = d0.dim();
  Matrix f = s0.entries();
  kernels::scale(t, f.data(), f.size());
  for (std::size_t i = 0; i < k; ++i) f(i, i) += 1.0;
  return SpdMatrix(symmetrize(matmul(f, matmul(d0.entries(), f))));
}

K1Point k1_geodesic(const Matrix& q0, double d0, const Matrix& b0, double s0,
                    double t) {
  require(q0.cols() == 1 && q0.rows() >= 2, "k1_geodesic: q0 must be n×1, n >= 2");
  require(b0.cols() == 1 && b0.rows() == q0.rows() - 1,
          "k1_geodesic: b0 must be (n-1)×1");
  if (!(d0 > 0.0)) throw std::invalid_argument("k1_geodesic: d0 must be positive");
  const double qnorm = frob_norm(q0);
  if (std::fabs(qnorm - 1.0) > 1e-10)
    throw std::invalid_argument("k1_geodesic: q0 not unit norm");

  const double nb = frob_norm(b0);
  if (nb == 0.0) {
    const double factor = 1.0 + s0 * t;
    if (factor <= 1e-12)
      throw GeodesicDomainError(
          "k1_geodesic: vertical branch leaves the cone at t = " +
              std::to_string(t),
          s0 < 0.0 ? -1.0 / s0 : std::numeric_limits<double>::infinity());
    return {q0, d0 * factor * factor};
  }

  const Matrix qperp = matkernels::complete_frame(q0);
  Matrix bhat = b0;
  kernels::scale(1.0 / nb, bhat.data(), bhat.size());
  const Matrix w0 = matmul(qperp, bhat);

  const double r0 = s0 / nb;
  const double c_tilde = nb * (1.0 + r0 * r0);
  const double r = r0 + c_tilde * t;
  const double theta = std::atan(r) - std::atan(r0);
  Matrix q = std::cos(theta) * q0;
  kernels::axpy(std::sin(theta), w0.data(), q.data(), q.size());
  const double d = d0 * (1.0 + r * r) / (1.0 + r0 * r0);
  return {q, d};
}

std::vector<PsdFixedRank> pullback_curve(const Trajectory& traj) {
  std::vector<PsdFixedRank> out;
  out.reserve(traj.states.size());
  for (const GeodesicState& s : traj.states)
    out.push_back(PsdFixedRank::from_factor(manifolds::StiefelPoint(s.q),
                                            SpdMatrix(s.d)));
  return out;
}

Matrix horizontal_lift(const BundlePoint& p, const AmbientTangent& v) {
  const PsdFixedRank sigma = bwgeom::phi(p);
  const double tang = bwgeom::tangency_residual(sigma, v);
  const double vnorm = frob_norm(v.v());
  if (tang > 1e-8 * std::max(1.0, vnorm))
    throw TangencyError("horizontal_lift: V not tangent, residual " +
                            std::to_string(tang),
                        tang);

  const std::size_t n = p.n(), k = p.k();
  const Matrix x0 =
      matmul(p.q(), matkernels::psd_sqrt(p.d().sym()).entries());

  // Equality-constrained least squares via the KKT system.
  const std::size_t unknowns = n * k;
  const std::size_t res_rows = n * (n + 1) / 2;
  const std::size_t con_rows = k * (k - 1) / 2;
  Matrix a(res_rows, unknowns);
  Matrix rhs(res_rows, 1);
  const double sqrt2 = std::sqrt(2.0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j, ++row) {
      const double wgt = (i == j) ? 1.0 : sqrt2;
      for (std::size_t l = 0; l < k; ++l) {
        a(row, i * k + l) += wgt * x0(j, l);
        a(row, j * k + l) += wgt * x0(i, l);
      }
      rhs(row, 0) = wgt * v.v()(i, j);
    }
  }
  Matrix c(con_rows, unknowns);
  row = 0;
  for (std::size_t p1 = 0; p1 < k; ++p1) {
    for (std::size_t p2 = p1 + 1; p2 < k; ++p2, ++row) {
      // (X0^T H)_{p1 p2} - (X0^T H)_{p2 p1} = 0
      for (std::size_t r = 0; r < n; ++r) {
        c(row, r * k + p2) += x0(r, p1);
        c(row, r * k + p1) -= x0(r, p2);
      }
    }
  }

  const std::size_t dim = unknowns + con_rows;
  Matrix kkt(dim, dim);
  set_block(kkt, 0, 0, matmul_tn(a, a));
  if (con_rows > 0) {
    set_block(kkt, 0, unknowns, transpose(c));
    set_block(kkt, unknowns, 0, c);
  }
  Matrix kkt_rhs(dim, 1);
  set_block(kkt_rhs, 0, 0, matmul_tn(a, rhs));
  const Matrix sol = matkernels::lu_solve(kkt, kkt_rhs);

  Matrix h(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) h(i, l) = sol(i * k + l, 0);

  const Matrix hx = matmul_nt(h, x0);
  const double res1 = frob_norm(hx + transpose(hx) - v.v());
  const Matrix xth = matmul_tn(x0, h);
  const double res2 = frob_norm(xth - transpose(xth));
  const double tol = 1e-8 * (1.0 + vnorm);
  if (res1 > tol || res2 > tol)
    throw std::runtime_error(
        "horizontal_lift: solver residual above tolerance (reconstruction " +
        std::to_string(res1) + ", symmetry " + std::to_string(res2) + ")");
  return h;
}

PsdFixedRank quotient_line_oracle(const Matrix& x0, const Matrix& h, double t) {
  require(x0.rows() == h.rows() && x0.cols() == h.cols(),
          "quotient_line_oracle: shape mismatch");
  Matrix z = x0;
  kernels::axpy(t, h.data(), z.data(), z.size());
  const matkernels::ThinSvd svd = matkernels::thin_svd(z);
  if (svd.sigma.empty() ||
      svd.sigma.back() <= matkernels::kRankTol * svd.sigma.front())
    throw RankError("quotient_line_oracle: rank drop at t = " + std::to_string(t) +
                        " (geodesic left the stratum)",
                    z.cols(), z.cols() - 1);
  return PsdFixedRank::from_matrix(matmul_nt(z, z), z.cols());
}

}  // namespace bwrank::geodesics
