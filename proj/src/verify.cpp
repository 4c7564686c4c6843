#include "bwrank/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bwrank/bwgeom.hpp"
#include "bwrank/errors.hpp"
#include "bwrank/geodesics.hpp"
#include "bwrank/logmaps.hpp"
#include "bwrank/matkernels.hpp"

namespace bwrank::verify {

using manifolds::BundlePoint;
using manifolds::BundleTangent;
using manifolds::Frame;
using manifolds::StiefelPoint;
using matkernels::SpdMatrix;
using matkernels::SymMatrix;

Matrix random_sym(rng::Generator& g, std::size_t k, double norm) {
  Matrix m = symmetrize(rng::normal_matrix(g, k, k));
  const double f = frob_norm(m);
  if (f > 0.0) m *= norm * g.uniform(0.3, 1.0) / f;
  return m;
}

Matrix random_skew(rng::Generator& g, std::size_t k, double norm) {
  Matrix raw = rng::normal_matrix(g, k, k);
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = 0.5 * (raw(i, j) - raw(j, i));
  const double f = frob_norm(m);
  if (f > 0.0) m *= norm * g.uniform(0.3, 1.0) / f;
  return m;
}

Matrix random_orthogonal_from(rng::Generator& g, std::size_t k) {
  matkernels::QrFull f = matkernels::householder_qr(rng::normal_matrix(g, k, k));
  for (std::size_t j = 0; j < k; ++j)
    if (f.r(j, j) < 0.0)
      for (std::size_t i = 0; i < k; ++i) f.q(i, j) = -f.q(i, j);
  return f.q;
}

Matrix random_spd(rng::Generator& g, std::size_t k, double eig_lo, double eig_hi) {
  const Matrix q = random_orthogonal_from(g, k);
  Matrix scaled(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const double lam = g.uniform(eig_lo, eig_hi);
    for (std::size_t i = 0; i < k; ++i) scaled(i, j) = q(i, j) * lam;
  }
  return symmetrize(matmul_nt(scaled, q));
}

Matrix random_stiefel(rng::Generator& g, std::size_t n, std::size_t k) {
  const matkernels::QrFull f = matkernels::householder_qr(rng::normal_matrix(g, n, k));
  return block(f.q, 0, 0, n, k);
}

BundlePoint random_bundle_point(rng::Generator& g, std::size_t n, std::size_t k,
                                double eig_lo, double eig_hi) {
  return BundlePoint(Frame(StiefelPoint(random_stiefel(g, n, k))),
                     SpdMatrix(random_spd(g, k, eig_lo, eig_hi)));
}

namespace {

struct DimPick {
  std::size_t n, k;
};

DimPick pick_dims(rng::Generator& g) {
  static const DimPick choices[] = {{3, 1}, {4, 2}, {5, 3}, {6, 2}};
  return choices[g.next_u64() % 4];
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

class Reporter {
 public:
  void observe(double metric, double tol, const std::string& what) {
    if (metric > worst_) {
      worst_ = metric;
      worst_what_ = what;
    }
    if (metric > tol) {
      failed_ = true;
      if (fail_note_.empty())
        fail_note_ = what + ": " + fmt(metric) + " > tol " + fmt(tol);
    }
  }
  void fail(const std::string& why) {
    failed_ = true;
    if (fail_note_.empty()) fail_note_ = why;
  }
  CheckResult result(const std::string& name) const {
    if (failed_) return {name, false, fail_note_};
    return {name, true, "max " + worst_what_ + " " + fmt(worst_)};
  }

 private:
  bool failed_ = false;
  double worst_ = 0.0;
  std::string worst_what_ = "residual";
  std::string fail_note_;
};

using CheckFn = std::function<CheckResult(rng::Generator&, int, double)>;

// --- matkernels -----------------------------------------------------------

CheckResult check_sylvester_residual(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 1 + g.next_u64() % 5;
    const Matrix d = random_spd(g, k, 0.2, 2.5);
    const Matrix tm = random_sym(g, k, 2.0);
    const Matrix s = matkernels::sylvester_solve_raw(d, tm);
    const Matrix ds = matmul(d, s);
    const double res = frob_norm(ds + transpose(ds) - tm) /
                       std::max(1.0, frob_norm(tm));
    rep.observe(res, 1e-10, "sylvester residual");
    rep.observe(frob_norm(s - transpose(s)), 1e-14, "solution asymmetry");
  }
  return rep.result("matkernels/sylvester-residual");
}

CheckResult check_sylvester_equivariance(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 1 + g.next_u64() % 4;
    const Matrix d = random_spd(g, k, 0.3, 2.0);
    const Matrix tm = random_sym(g, k, 1.0);
    const Matrix gq = random_orthogonal_from(g, k);
    const Matrix lhs = matkernels::sylvester_solve_raw(
        matmul_tn(gq, matmul(d, gq)), matmul_tn(gq, matmul(tm, gq)));
    const Matrix rhs =
        matmul_tn(gq, matmul(matkernels::sylvester_solve_raw(d, tm), gq));
    rep.observe(frob_norm(lhs - rhs), 1e-9, "equivariance gap");
  }
  return rep.result("matkernels/sylvester-equivariance");
}

CheckResult check_sylvester_self_adjoint(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 1 + g.next_u64() % 4;
    const Matrix d = random_spd(g, k, 0.3, 2.0);
    const Matrix t1 = random_sym(g, k, 1.0);
    const Matrix t2 = random_sym(g, k, 1.0);
    const Matrix s1 = matkernels::sylvester_solve_raw(d, t1);
    const Matrix s2 = matkernels::sylvester_solve_raw(d, t2);
    rep.observe(std::fabs(trace(matmul(s1, t2)) - trace(matmul(t1, s2))), 1e-9,
                "self-adjointness gap");
    const double a = g.uniform(-2.0, 2.0), b = g.uniform(-2.0, 2.0);
    const Matrix lin = matkernels::sylvester_solve_raw(d, a * t1 + b * t2);
    rep.observe(frob_norm(lin - (a * s1 + b * s2)), 1e-9, "linearity gap");
  }
  return rep.result("matkernels/sylvester-self-adjoint");
}

CheckResult check_psd_sqrt_identity(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 1 + g.next_u64() % 5;
    const Matrix p = random_spd(g, k, 0.0 + 0.05, 2.0);
    const Matrix root =
        matkernels::psd_sqrt(SymMatrix(matmul(p, p))).entries();
    rep.observe(frob_norm(root - p) / std::max(1.0, frob_norm(p)), 1e-8,
                "sqrt(P^2) - P");
  }
  return rep.result("matkernels/psd-sqrt-identity");
}

CheckResult check_determinism(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 1 + g.next_u64() % 4;
    const Matrix a = random_sym(g, k, 1.5);
    const auto e1 = matkernels::sym_eig(SymMatrix(a));
    const auto e2 = matkernels::sym_eig(SymMatrix(a));
    if (!(e1.values == e2.values && e1.vectors == e2.vectors))
      rep.fail("sym_eig not bitwise deterministic");
    const Matrix m = rng::normal_matrix(g, k + 2, k);
    const auto s1 = matkernels::thin_svd(m);
    const auto s2 = matkernels::thin_svd(m);
    if (!(s1.sigma == s2.sigma && s1.u == s2.u && s1.v == s2.v))
      rep.fail("thin_svd not bitwise deterministic");
    const std::uint64_t seed = g.next_u64();
    if (!(matkernels::random_orthogonal(k, seed, 1) ==
          matkernels::random_orthogonal(k, seed, 1)))
      rep.fail("random_orthogonal not bitwise deterministic");
    rep.observe(0.0, 1.0, "determinism");
  }
  return rep.result("matkernels/bitwise-determinism");
}

// --- manifolds --------------------------------------------------------------

CheckResult check_split_roundtrip(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const Frame f(StiefelPoint(random_stiefel(g, n, k)));
    const Matrix a0 = random_skew(g, k, 1.0);
    const Matrix b0 = rng::normal_matrix(g, n - k, k);
    const Matrix v = matmul(f.q(), a0) + matmul(f.qperp(), b0);
    const manifolds::StiefelTangent split = manifolds::stiefel_split(f, v);
    rep.observe(frob_norm(split.to_ambient(f) - v), 1e-9, "split roundtrip");
    rep.observe(frob_norm(split.a - a0), 1e-10, "A recovery");
    rep.observe(frob_norm(split.b - b0), 1e-10, "B recovery");
  }
  return rep.result("manifolds/split-roundtrip");
}

CheckResult check_dpi(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const Frame f(StiefelPoint(random_stiefel(g, n, k)));
    const Matrix a0 = random_skew(g, k, 1.0);
    const Matrix b0 = rng::normal_matrix(g, n - k, k);
    const Matrix mixed = matmul(f.q(), a0) + matmul(f.qperp(), b0);
    rep.observe(frob_norm(manifolds::grassmann_dpi(f, mixed) - b0), 1e-10,
                "dpi B-block");
    rep.observe(frob_norm(manifolds::grassmann_dpi(f, matmul(f.q(), a0))), 1e-10,
                "dpi vertical kernel");
  }
  return rep.result("manifolds/grassmann-dpi");
}

CheckResult check_principal_angles(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const StiefelPoint q1(random_stiefel(g, n, k));
    const StiefelPoint q2(random_stiefel(g, n, k));
    const auto a12 = manifolds::principal_angles(q1, q2);
    const auto a21 = manifolds::principal_angles(q2, q1);
    double gap = 0.0;
    for (std::size_t i = 0; i < a12.size(); ++i)
      gap = std::max(gap, std::fabs(a12[i] - a21[i]));
    rep.observe(gap, 1e-9, "symmetry gap");
    const StiefelPoint q1g(matmul(q1.q(), random_orthogonal_from(g, k)));
    const auto arot = manifolds::principal_angles(q1g, q2);
    gap = 0.0;
    for (std::size_t i = 0; i < a12.size(); ++i)
      gap = std::max(gap, std::fabs(a12[i] - arot[i]));
    rep.observe(gap, 1e-9, "O(k) invariance gap");
  }
  return rep.result("manifolds/principal-angle-invariance");
}

CheckResult check_group_act_class(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k);
    const Matrix gq = random_orthogonal_from(g, k);
    const BundlePoint moved = manifolds::group_act(gq, p);
    rep.observe(frob_norm(moved.sigma() - p.sigma()) /
                    std::max(1.0, frob_norm(p.sigma())),
                1e-9, "class image gap");
    if (!manifolds::same_class(p, moved)) rep.fail("same_class rejected the orbit");
  }
  return rep.result("manifolds/group-act-class-equality");
}

// --- bwgeom -----------------------------------------------------------------

BundleTangent random_bundle_tangent(rng::Generator& g, std::size_t n,
                                    std::size_t k, double norm) {
  Matrix b = rng::normal_matrix(g, n - k, k);
  const double f = frob_norm(b);
  if (f > 0.0) b *= norm * g.uniform(0.3, 1.0) / f;
  return BundleTangent(b, SymMatrix(random_sym(g, k, norm)));
}

CheckResult check_pullback_identity(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k);
    const BundleTangent w1 = random_bundle_tangent(g, n, k, 1.0);
    const BundleTangent w2 = random_bundle_tangent(g, n, k, 1.0);
    const double h = bwgeom::bundle_metric(p, w1, w2);
    const double a = bwgeom::ambient_metric(bwgeom::phi(p), bwgeom::dphi(p, w1),
                                            bwgeom::dphi(p, w2));
    rep.observe(std::fabs(h - a) / (1.0 + std::fabs(h)), 1e-9, "pullback gap");
  }
  return rep.result("bwgeom/pullback-identity");
}

CheckResult check_dphi_gauge_kernel(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k);
    const Matrix a = random_skew(g, k, 1.0);
    const Matrix da = matmul(p.d().entries(), a);
    const Matrix t_gauge = da + transpose(da);  // D A - A D, symmetric for skew A
    const bwgeom::AmbientTangent img =
        bwgeom::dphi_raw(p, matmul(p.q(), a), SymMatrix(t_gauge));
    rep.observe(frob_norm(img.v()), 1e-10, "gauge image norm");
  }
  return rep.result("bwgeom/dphi-gauge-kernel");
}

CheckResult check_ok_invariance(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k);
    const BundleTangent w1 = random_bundle_tangent(g, n, k, 1.0);
    const BundleTangent w2 = random_bundle_tangent(g, n, k, 1.0);
    const Matrix gq = random_orthogonal_from(g, k);
    const auto [pm, w1m] = manifolds::group_act(gq, p, w1);
    const BundleTangent w2m = manifolds::group_act(gq, p, w2).second;
    const double h0 = bwgeom::bundle_metric(p, w1, w2);
    const double h1 = bwgeom::bundle_metric(pm, w1m, w2m);
    rep.observe(std::fabs(h0 - h1) / (1.0 + std::fabs(h0)), 1e-9,
                "metric invariance gap");
    rep.observe(frob_norm(bwgeom::phi(pm).sigma() - bwgeom::phi(p).sigma()) /
                    std::max(1.0, frob_norm(p.sigma())),
                1e-9, "phi invariance gap");
    const BundlePoint p2 = random_bundle_point(g, n, k);
    const double d0 = bwgeom::bw_distance(p.sigma(), p2.sigma());
    const double d1 = bwgeom::bw_distance(pm.sigma(), p2.sigma());
    rep.observe(std::fabs(d0 - d1) / (1.0 + d0), 1e-9, "distance invariance gap");
  }
  return rep.result("bwgeom/ok-invariance");
}

CheckResult check_phi_roundtrip(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k);
    const bwgeom::PsdFixedRank s = bwgeom::phi(p);
    const BundlePoint back = bwgeom::phi_inv(s);
    rep.observe(frob_norm(back.sigma() - s.sigma()) /
                    std::max(1.0, frob_norm(s.sigma())),
                1e-9, "phi(phi_inv) gap");
    if (!manifolds::same_class(p, back)) rep.fail("phi_inv lost the class");
    const bwgeom::PsdFixedRank s2 = bwgeom::phi(back);
    rep.observe(frob_norm(s2.sigma() - s.sigma()) /
                    std::max(1.0, frob_norm(s.sigma())),
                1e-9, "matrix roundtrip gap");
  }
  return rep.result("bwgeom/phi-roundtrip");
}

// --- geodesics ----------------------------------------------------------------

geodesics::GeodesicState random_state(rng::Generator& g, std::size_t n,
                                      std::size_t k, double vel_norm) {
  const BundlePoint p = random_bundle_point(g, n, k, 0.7, 1.6);
  Matrix b0 = rng::normal_matrix(g, n - k, k);
  const double f = frob_norm(b0);
  if (f > 0.0) b0 *= vel_norm * g.uniform(0.4, 1.0) / f;
  return geodesics::make_state_s(p, b0, random_sym(g, k, vel_norm));
}

CheckResult check_conservation(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const geodesics::GeodesicState s0 = random_state(g, n, k, 0.5);
    const double e0 = geodesics::energy(s0);
    const geodesics::Trajectory traj = geodesics::integrate(s0, 1.0, dt);
    for (const auto& m : traj.monitors) {
      rep.observe(std::fabs(m.energy - e0) / (1.0 + std::fabs(e0)), 1e-7,
                  "energy drift");
      rep.observe(m.ortho_residual, 1e-8, "frame residual");
      rep.observe(m.reortho_correction, 1e-9, "reortho correction");
    }
  }
  return rep.result("geodesics/energy-frame-conservation");
}

/// B D is conserved on the commuting locus (diagonal D, S with axis-aligned
/// B rows), the family every closed form lives in.
CheckResult check_momentum_commuting(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 2 + g.next_u64() % 2;
    const std::size_t n = k + 1 + g.next_u64() % 2;
    Matrix d0(k, k), s0(k, k), b0(n - k, k);
    for (std::size_t i = 0; i < k; ++i) {
      d0(i, i) = g.uniform(0.7, 1.6);
      s0(i, i) = g.uniform(-0.4, 0.4);
    }
    for (std::size_t i = 0; i < n - k; ++i) b0(i, i) = g.uniform(-0.5, 0.5);
    const Matrix full = random_orthogonal_from(g, n);
    const BundlePoint p(Frame(StiefelPoint(block(full, 0, 0, n, k)),
                              block(full, 0, k, n, n - k)),
                        SpdMatrix(d0));
    const geodesics::Trajectory traj =
        geodesics::integrate(geodesics::make_state_s(p, b0, s0), 1.0, dt);
    for (const auto& m : traj.monitors)
      rep.observe(m.momentum_residual, 1e-7, "momentum drift");
  }
  return rep.result("geodesics/momentum-commuting-data");
}

/// Off the commuting locus the momentum obeys d/dt(B D) = B (D S - S D);
/// check the integrated identity against the recorded trajectory.
CheckResult check_momentum_drift_identity(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const geodesics::GeodesicState s0 = random_state(g, n, k, 0.5);
    const geodesics::Trajectory traj = geodesics::integrate(s0, 1.0, dt);
    const Matrix k0 = geodesics::momentum(s0);
    Matrix integral(s0.b.rows(), s0.b.cols());
    const auto commutator_term = [](const geodesics::GeodesicState& st) {
      const Matrix ds = matmul(st.d, st.s);
      return matmul(st.b, ds - transpose(ds));
    };
    Matrix prev = commutator_term(traj.states.front());
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
      const Matrix cur = commutator_term(traj.states[i]);
      const double h = traj.times[i] - traj.times[i - 1];
      integral += (0.5 * h) * (prev + cur);
      prev = cur;
      rep.observe(
          frob_norm(geodesics::momentum(traj.states[i]) - k0 - integral),
          1e-6, "drift identity residual");
    }
  }
  return rep.result("geodesics/momentum-drift-identity");
}

CheckResult check_fibers(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k, 0.7, 1.6);
    const Matrix s0m = random_sym(g, k, 0.45);
    const geodesics::GeodesicState s0 =
        geodesics::make_state_s(p, Matrix(n - k, k), s0m);
    const geodesics::Trajectory traj = geodesics::integrate(s0, 1.0, dt);
    const SpdMatrix d0(s0.d);
    const SymMatrix s0s(s0m);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      rep.observe(frob_norm(traj.states[i].q - s0.q), 1e-9, "fiber Q drift");
      const Matrix d_exact =
          geodesics::vertical_geodesic(d0, s0s, traj.times[i]).entries();
      rep.observe(frob_norm(traj.states[i].d - d_exact), 1e-7, "fiber D gap");
    }
  }
  return rep.result("geodesics/totally-geodesic-fibers");
}

CheckResult check_gauge_covariance(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const geodesics::GeodesicState s0 = random_state(g, n, k, 0.5);
    const Matrix gq = random_orthogonal_from(g, k);
    const geodesics::Trajectory base = geodesics::integrate(s0, 1.0, dt);
    const geodesics::Trajectory moved =
        geodesics::integrate(geodesics::act_state(gq, s0), 1.0, dt);
    for (std::size_t i = 0; i < base.states.size(); i += 100) {
      const geodesics::GeodesicState expect =
          geodesics::act_state(gq, base.states[i]);
      double gap = frob_norm(moved.states[i].q - expect.q);
      gap = std::max(gap, frob_norm(moved.states[i].d - expect.d));
      gap = std::max(gap, frob_norm(moved.states[i].b - expect.b));
      gap = std::max(gap, frob_norm(moved.states[i].s - expect.s));
      rep.observe(gap, 1e-7, "gauge covariance gap");
    }
  }
  return rep.result("geodesics/gauge-covariance");
}

CheckResult check_oracle_equivalence(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const BundlePoint p = random_bundle_point(g, n, k, 0.8, 1.5);
    Matrix b0 = rng::normal_matrix(g, n - k, k);
    const double f = frob_norm(b0);
    if (f > 0.0) b0 *= 0.4 * g.uniform(0.4, 1.0) / f;
    const Matrix s0m = random_sym(g, k, 0.4);
    const geodesics::GeodesicState s0 = geodesics::make_state_s(p, b0, s0m);

    const Matrix ds = matmul(s0.d, s0m);
    const SymMatrix t0(ds + transpose(ds));
    const bwgeom::AmbientTangent v = bwgeom::dphi(p, BundleTangent(b0, t0));
    const Matrix x0 =
        matmul(p.q(), matkernels::psd_sqrt(p.d().sym()).entries());
    const Matrix h = geodesics::horizontal_lift(p, v);

    const double sigma_scale = 1.0 + frob_norm(p.sigma());
    const geodesics::Trajectory traj = geodesics::integrate(s0, 1.0, dt);
    const auto curve = geodesics::pullback_curve(traj);
    for (std::size_t i = 0; i < curve.size(); i += 25) {
      const bwgeom::PsdFixedRank line =
          geodesics::quotient_line_oracle(x0, h, traj.times[i]);
      rep.observe(frob_norm(curve[i].sigma() - line.sigma()) / sigma_scale, 1e-6,
                  "oracle gap");
    }
  }
  return rep.result("geodesics/oracle-equivalence");
}

CheckResult check_example3(rng::Generator&, int trials, double dt) {
  Reporter rep;
  if (trials <= 0) return rep.result("geodesics/example3-closed-forms");
  Matrix b0(2, 3);
  b0(0, 0) = 0.5;
  b0(1, 1) = 0.5;
  Matrix s0(3, 3);
  s0(0, 0) = s0(1, 1) = s0(2, 2) = 0.25;
  const Frame frame(StiefelPoint(block(Matrix::identity(5), 0, 0, 5, 3)),
                    block(Matrix::identity(5), 0, 3, 5, 2));
  const BundlePoint p(frame, SpdMatrix(Matrix::identity(3)));
  const geodesics::Trajectory traj =
      geodesics::integrate(geodesics::make_state_s(p, b0, s0), 1.0, dt);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double r = 0.5 + 0.625 * t;
    const double d12 = 0.8 * (1.0 + r * r);
    const double b12 = 5.0 / (8.0 * (1.0 + r * r));
    const double s12 = 5.0 * r / (8.0 * (1.0 + r * r));
    const double d3 = (1.0 + 0.25 * t) * (1.0 + 0.25 * t);
    const double s3 = 0.25 / (1.0 + 0.25 * t);
    const auto& st = traj.states[i];
    double gap = 0.0;
    gap = std::max(gap, std::fabs(st.d(0, 0) - d12));
    gap = std::max(gap, std::fabs(st.d(1, 1) - d12));
    gap = std::max(gap, std::fabs(st.d(2, 2) - d3));
    gap = std::max(gap, std::fabs(st.b(0, 0) - b12));
    gap = std::max(gap, std::fabs(st.b(1, 1) - b12));
    gap = std::max(gap, std::fabs(st.s(0, 0) - s12));
    gap = std::max(gap, std::fabs(st.s(1, 1) - s12));
    gap = std::max(gap, std::fabs(st.s(2, 2) - s3));
    const double theta = std::atan(r) - std::atan(0.5);
    gap = std::max(gap, std::fabs(st.q(0, 0) - std::cos(theta)));
    gap = std::max(gap, std::fabs(st.q(1, 1) - std::cos(theta)));
    gap = std::max(gap, std::fabs(st.q(3, 0) - std::sin(theta)));
    gap = std::max(gap, std::fabs(st.q(4, 1) - std::sin(theta)));
    gap = std::max(gap, std::fabs(st.q(2, 2) - 1.0));
    rep.observe(gap, 1e-6, "closed-form gap");
  }
  return rep.result("geodesics/example3-closed-forms");
}

CheckResult check_energy_derivative(rng::Generator& g, int trials, double dt) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const auto [n, k] = pick_dims(g);
    const geodesics::GeodesicState s0 = random_state(g, n, k, 0.5);
    const geodesics::Trajectory traj = geodesics::integrate(s0, 5.0 * dt, dt);
    const double fd = (traj.monitors[1].energy - traj.monitors[0].energy) / dt;
    rep.observe(std::fabs(fd), 1e-6, "dE/dt at 0");
  }
  return rep.result("geodesics/energy-derivative");
}

// --- logmaps -------------------------------------------------------------------

/// X spanning l shared directions with Y plus r orthogonal ones.
void make_log_pair(rng::Generator& g, std::size_t n, std::size_t k,
                   std::size_t r, Matrix& x, Matrix& y) {
  Matrix ex(n, k), ey(n, k);
  const std::size_t l = k - r;
  for (std::size_t j = 0; j < k; ++j) ex(j, j) = 1.0;
  for (std::size_t j = 0; j < l; ++j) ey(j, j) = 1.0;
  for (std::size_t j = 0; j < r; ++j) ey(k + j, l + j) = 1.0;
  Matrix m1 = rng::normal_matrix(g, k, k);
  Matrix m2 = rng::normal_matrix(g, k, k);
  while (matkernels::det_sign(m1) == 0) m1 = rng::normal_matrix(g, k, k);
  while (matkernels::det_sign(m2) == 0) m2 = rng::normal_matrix(g, k, k);
  x = matmul(ex, m1);
  y = matmul(ey, m2);
}

CheckResult check_log_bijection(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    Matrix x, y;
    make_log_pair(g, 6, 3, 2, x, y);
    const logmaps::LogIndexParams p = logmaps::log_index_params(x, y);
    if (p.r != 2) {
      rep.fail("constructed pair lost r = 2");
      continue;
    }
    const Matrix rr1 = random_orthogonal_from(g, 2);
    const Matrix rr2 = random_orthogonal_from(g, 2);
    const Matrix img1 = logmaps::build_log_rotation(p, rr1);
    const Matrix img2 = logmaps::build_log_rotation(p, rr2);
    if (frob_norm(rr1 - rr2) >= 1e-5 && frob_norm(img1 - img2) < 1e-6)
      rep.fail("distinct R_r mapped to nearly equal rotations");
    rep.observe(frob_norm(logmaps::extract_rr(p, img1) - rr1), 1e-9,
                "R_r roundtrip gap");
    rep.observe(frob_norm(logmaps::extract_rr(p, img2) - rr2), 1e-9,
                "R_r roundtrip gap");
  }
  return rep.result("logmaps/bijection-witness");
}

CheckResult check_log_rank_consistency(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    const std::size_t k = 2 + g.next_u64() % 2;
    const std::size_t r = g.next_u64() % (k + 1);
    const std::size_t n = 2 * k + 1;
    Matrix x, y;
    make_log_pair(g, n, k, r, x, y);
    try {
      const logmaps::LogRankResult lr = logmaps::log_rank(x, y);
      if (lr.r != r) rep.fail("log_rank r mismatch vs construction");
      // cross-check against the factored strata points
      const auto p1 = bwgeom::phi_inv(
          bwgeom::PsdFixedRank::from_matrix(matmul_nt(x, x), k));
      const auto p2 = bwgeom::phi_inv(
          bwgeom::PsdFixedRank::from_matrix(matmul_nt(y, y), k));
      const auto angles = manifolds::principal_angles(
          StiefelPoint(p1.q()), StiefelPoint(p2.q()));
      if (manifolds::orthogonal_count(angles) != lr.r)
        rep.fail("principal-angle count disagrees on phi_inv factors");
      rep.observe(0.0, 1.0, "consistency");
    } catch (const std::exception& e) {
      rep.fail(std::string("log_rank raised: ") + e.what());
    }
  }
  return rep.result("logmaps/rank-angle-consistency");
}

CheckResult check_certificate_psd(rng::Generator& g, int trials, double) {
  Reporter rep;
  for (int t = 0; t < trials; ++t) {
    Matrix x, y;
    const std::size_t r = g.next_u64() % 3;
    make_log_pair(g, 7, 3, r, x, y);
    const logmaps::LogIndexParams p = logmaps::log_index_params(x, y);
    const Matrix rhs =
        matkernels::psd_sqrt(SymMatrix(matmul_nt(p.gram, p.gram))).entries();
    rep.observe(frob_norm(rhs - transpose(rhs)), 1e-12, "sqrt asymmetry");
    const auto family = logmaps::sample_log_family(p, {g.next_u64(), g.next_u64()});
    const double tol = 1e-8 * (1.0 + (p.sigma.empty() ? 0.0 : p.sigma.front()));
    for (const Matrix& rot : family)
      rep.observe(max_abs(matmul(p.gram, rot) - rhs), tol, "certificate gap");
  }
  return rep.result("logmaps/certificate-psd-side");
}

}  // namespace

std::vector<CheckResult> run_all(const Options& opt) {
  std::vector<CheckResult> results;
  if (opt.trials <= 0) return results;

  const CheckFn checks[] = {
      check_sylvester_residual,
      check_sylvester_equivariance,
      check_sylvester_self_adjoint,
      check_psd_sqrt_identity,
      check_determinism,
      check_split_roundtrip,
      check_dpi,
      check_principal_angles,
      check_group_act_class,
      check_pullback_identity,
      check_dphi_gauge_kernel,
      check_ok_invariance,
      check_phi_roundtrip,
      check_conservation,
      check_momentum_commuting,
      check_momentum_drift_identity,
      check_fibers,
      check_gauge_covariance,
      check_oracle_equivalence,
      check_example3,
      check_energy_derivative,
      check_log_bijection,
      check_log_rank_consistency,
      check_certificate_psd,
  };

  rng::Generator root(opt.seed);
  for (const CheckFn& fn : checks) {
    rng::Generator sub = root.fork();
    try {
      results.push_back(fn(sub, opt.trials, opt.dt));
    } catch (const std::exception& e) {
      results.push_back({"(check aborted)", false, e.what()});
    }
  }
  return results;
}

}  // namespace bwrank::verify
