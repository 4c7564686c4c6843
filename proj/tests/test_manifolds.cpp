#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bwrank/errors.hpp"
#include "bwrank/manifolds.hpp"
#include "bwrank/verify.hpp"
#include "helpers.hpp"

using bwrank::Matrix;
namespace mf = bwrank::manifolds;
namespace mk = bwrank::matkernels;
using bwrank::verify::random_bundle_point;
using bwrank::verify::random_orthogonal_from;
using bwrank::verify::random_skew;
using bwrank::verify::random_stiefel;
using bwrank::verify::random_sym;

TEST_CASE("StiefelPoint and Frame validate orthonormality") {
  CHECK_THROWS_AS(mf::StiefelPoint(Matrix{{1.0}, {1.0}}), std::invalid_argument);
  bwrank::rng::Generator g(3);
  const mf::StiefelPoint q(random_stiefel(g, 5, 2));
  const mf::Frame f(q);
  CHECK(testutil::ortho_residual(f.full()) < 1e-12);
  CHECK_THROWS_AS(mf::Frame(q, bwrank::rng::normal_matrix(g, 5, 3)),
                  std::invalid_argument);
}

TEST_CASE("stiefel_split: zero, forced low-dimensional case, and round trip") {
  bwrank::rng::Generator g(5);
  const mf::Frame f(mf::StiefelPoint(random_stiefel(g, 4, 2)));
  const mf::StiefelTangent zero = mf::stiefel_split(f, Matrix(4, 2));
  CHECK(bwrank::frob_norm(zero.a) == 0.0);
  CHECK(bwrank::frob_norm(zero.b) == 0.0);

  // n=2, k=1 with the explicit frame (e1, e2): V = e2 has A = 0, B = (1)
  Matrix q0(2, 1), qp0(2, 1), v(2, 1);
  q0(0, 0) = 1.0;
  qp0(1, 0) = 1.0;
  v(1, 0) = 1.0;
  const mf::Frame low(mf::StiefelPoint(q0), qp0);
  const mf::StiefelTangent split = mf::stiefel_split(low, v);
  CHECK(split.a(0, 0) == 0.0);
  CHECK(split.b(0, 0) == doctest::Approx(1.0));

  for (int trial = 0; trial < 8; ++trial) {
    const mf::Frame fr(mf::StiefelPoint(random_stiefel(g, 5, 3)));
    const Matrix a0 = random_skew(g, 3, 1.0);
    const Matrix b0 = bwrank::rng::normal_matrix(g, 2, 3);
    const Matrix tangent = bwrank::matmul(fr.q(), a0) + bwrank::matmul(fr.qperp(), b0);
    const mf::StiefelTangent s = mf::stiefel_split(fr, tangent);
    CHECK(testutil::max_diff(s.a, a0) < 1e-10);
    CHECK(testutil::max_diff(s.b, b0) < 1e-10);
    CHECK(bwrank::frob_norm(s.to_ambient(fr) - tangent) < 1e-9);
  }
}

TEST_CASE("stiefel_split rejects non-tangent input") {
  bwrank::rng::Generator g(7);
  const mf::Frame f(mf::StiefelPoint(random_stiefel(g, 4, 2)));
  CHECK_THROWS_AS(mf::stiefel_split(f, f.q()), bwrank::TangencyError);
}

TEST_CASE("grassmann_dpi kills vertical directions and reads off B") {
  bwrank::rng::Generator g(9);
  const mf::Frame f(mf::StiefelPoint(random_stiefel(g, 5, 2)));
  const Matrix a0 = random_skew(g, 2, 1.0);
  const Matrix b0 = bwrank::rng::normal_matrix(g, 3, 2);
  CHECK(bwrank::frob_norm(mf::grassmann_dpi(f, bwrank::matmul(f.q(), a0))) < 1e-10);
  CHECK(testutil::max_diff(mf::grassmann_dpi(f, bwrank::matmul(f.qperp(), b0)), b0) <
        1e-10);
  const Matrix mixed =
      bwrank::matmul(f.q(), a0) + bwrank::matmul(f.qperp(), b0);
  CHECK(testutil::max_diff(mf::grassmann_dpi(f, mixed), b0) < 1e-10);
}

TEST_CASE("principal_angles: coincident, orthogonal and rotated subspaces") {
  bwrank::rng::Generator g(11);
  const mf::StiefelPoint q(random_stiefel(g, 5, 2));
  for (double a : mf::principal_angles(q, q)) CHECK(std::fabs(a) < 1e-12);

  // span(e1,e2) vs span(e1,e3): angles (0, pi/2)
  Matrix q1(3, 2), q2(3, 2);
  q1(0, 0) = q1(1, 1) = 1.0;
  q2(0, 0) = q2(2, 1) = 1.0;
  const auto angles =
      mf::principal_angles(mf::StiefelPoint(q1), mf::StiefelPoint(q2));
  CHECK(angles[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(angles[1] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(mf::orthogonal_count(angles) == 1);

  const mf::StiefelPoint rotated(
      bwrank::matmul(q.q(), random_orthogonal_from(g, 2)));
  for (double a : mf::principal_angles(q, rotated)) CHECK(std::fabs(a) < 1e-12);

  CHECK_THROWS_AS(mf::principal_angles(q, mf::StiefelPoint(random_stiefel(g, 4, 2))),
                  bwrank::DimensionError);
}

TEST_CASE("fiber_chart recovers the fiber coordinate from any representative") {
  bwrank::rng::Generator g(13);
  const Matrix q0m = random_stiefel(g, 5, 3);
  const mf::StiefelPoint q0(q0m);
  const Matrix s = bwrank::verify::random_spd(g, 3, 0.5, 2.0);

  const mf::BundlePoint same{mf::Frame(q0), mk::SpdMatrix(s)};
  CHECK(testutil::max_diff(mf::fiber_chart(q0, same).entries(), s) < 1e-12);

  const Matrix rot = random_orthogonal_from(g, 3);
  const mf::BundlePoint moved(
      mf::Frame(mf::StiefelPoint(bwrank::matmul(q0m, rot))),
      mk::SpdMatrix(bwrank::matmul_tn(rot, bwrank::matmul(s, rot))));
  CHECK(testutil::max_diff(mf::fiber_chart(q0, moved).entries(), s) < 1e-9);

  const mf::BundlePoint elsewhere(mf::Frame(mf::StiefelPoint(random_stiefel(g, 5, 3))),
                                  mk::SpdMatrix(s));
  CHECK_THROWS_AS(mf::fiber_chart(q0, elsewhere), std::domain_error);
}

TEST_CASE("group_act: identity, class preservation, orthogonality check") {
  bwrank::rng::Generator g(17);
  const mf::BundlePoint p = random_bundle_point(g, 5, 2);
  const mf::BundleTangent w(bwrank::rng::normal_matrix(g, 3, 2),
                            mk::SymMatrix(random_sym(g, 2, 1.0)));

  const auto [p_id, w_id] = mf::group_act(Matrix::identity(2), p, w);
  CHECK(testutil::max_diff(p_id.q(), p.q()) == 0.0);
  CHECK(testutil::max_diff(w_id.b, w.b) == 0.0);

  const Matrix rot = random_orthogonal_from(g, 2);
  const mf::BundlePoint moved = mf::group_act(rot, p);
  CHECK(mf::same_class(p, moved));
  CHECK(bwrank::frob_norm(moved.sigma() - p.sigma()) <=
        1e-9 * bwrank::frob_norm(p.sigma()));

  CHECK_THROWS_AS(mf::group_act(2.0 * Matrix::identity(2), p, w),
                  std::invalid_argument);
}

TEST_CASE("GrassmannPoint projector is idempotent with trace k") {
  bwrank::rng::Generator g(19);
  const mf::GrassmannPoint gp(mf::StiefelPoint(random_stiefel(g, 6, 2)));
  const Matrix& pr = gp.projector();
  CHECK(bwrank::frob_norm(bwrank::matmul(pr, pr) - pr) < 1e-9);
  CHECK(bwrank::trace(pr) == doctest::Approx(2.0).epsilon(1e-9));
}
