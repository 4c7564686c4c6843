#pragma once

#include <cstddef>
#include <vector>

#include "bwrank/bwgeom.hpp"
#include "bwrank/manifolds.hpp"
#include "bwrank/matrix.hpp"

namespace bwrank::geodesics {

using bwgeom::AmbientTangent;
using bwgeom::PsdFixedRank;
using manifolds::BundlePoint;
using manifolds::BundleTangent;
using matkernels::SpdMatrix;
using matkernels::SymMatrix;

/// Full state of the geodesic system:
///   Qdot = Q_perp B,  Q_perp_dot = -Q B^T,
///   Ddot = D S + S D,
///   Bdot = -2 B S,
///   Sdot = B^T B - S^2.
/// The same struct holds state derivatives (identical block shapes).
///
/// The flow is the one whose image Q D Q^T traces the projected straight
/// lines of the factor space (the independent oracle below). Along it the
/// momentum obeys d/dt(B D) = B (D S - S D), so B D is a first integral
/// exactly when D and S commute; that locus contains the fiber, rank-one
/// and decoupled-diagonal families with their closed forms.
struct GeodesicState {
  Matrix q;      // n×k
  Matrix qperp;  // n×(n-k)
  Matrix d;      // k×k symmetric, monitored SPD
  Matrix b;      // (n-k)×k
  Matrix s;      // k×k symmetric

  std::size_t n() const { return q.rows(); }
  std::size_t k() const { return q.cols(); }
};

struct MonitorRecord {
  double energy;
  double momentum_residual;   // ||B D - B0 D0||_F
  double ortho_residual;      // ||[Q Qperp]^T [Q Qperp] - I||_F
  double reortho_correction;  // ||frame before - after polar projection||_F
};

struct Trajectory {
  std::vector<double> times;  // strictly increasing, starts at 0
  std::vector<GeodesicState> states;
  std::vector<MonitorRecord> monitors;
};

enum class Reortho { on, off };

/// Initial state from a bundle point and tangent; S0 = S_{D0}(T0).
GeodesicState make_state(const BundlePoint& p, const BundleTangent& w);
/// Initial state with S given directly.
GeodesicState make_state_s(const BundlePoint& p, const Matrix& b0, const Matrix& s0);

/// Right O(k) action on a state: (QG, Q_perp, G^T D G, BG, G^T S G).
GeodesicState act_state(const Matrix& g, const GeodesicState& s);

/// Throws IntegrationError (time unknown here, reported as the caller's t)
/// when D is numerically singular.
GeodesicState ode_rhs(const GeodesicState& s);

/// Classical fixed-step 4th-order integration over [0, t_max] with per-step
/// invariant monitors. With reortho on, [Q Q_perp] is polar-projected back
/// to the orthogonal group each step and the correction magnitude logged.
/// Loss of positivity of D aborts with IntegrationError carrying the time.
Trajectory integrate(const GeodesicState& s0, double t_max, double dt = 1e-3,
                     Reortho reortho = Reortho::on);

Matrix momentum(const GeodesicState& s);  // B D, conserved along geodesics
double energy(const GeodesicState& s);    // (1/2)Tr(B D B^T) + (1/2)Tr(S D S)

/// Fiber geodesic D(t) = (I + tS0) D0 (I + tS0); throws GeodesicDomainError
/// with the maximal admissible t when I + tS0 is not positive definite.
SpdMatrix vertical_geodesic(const SpdMatrix& d0, const SymMatrix& s0, double t);

/// Closed-form rank-one geodesic in the q0-frame coordinates. b0 = 0
/// delegates to the fiber formula d(t) = d0 (1 + s0 t)^2.
struct K1Point {
  Matrix q;  // unit n-vector (n×1)
  double d;
};
K1Point k1_geodesic(const Matrix& q0, double d0, const Matrix& b0, double s0,
                    double t);

/// phi applied pointwise along a trajectory.
std::vector<PsdFixedRank> pullback_curve(const Trajectory& traj);

/// Initial velocity of the flat quotient line at X0 = Q D^{1/2}: solves
/// V = H X0^T + X0 H^T with X0^T H symmetric by constrained least squares.
Matrix horizontal_lift(const BundlePoint& p, const AmbientTangent& v);

/// (X0 + tH)(X0 + tH)^T, the straight-line geodesic oracle; errors when the
/// line leaves the rank-k stratum.
PsdFixedRank quotient_line_oracle(const Matrix& x0, const Matrix& h, double t);

}  // namespace bwrank::geodesics
