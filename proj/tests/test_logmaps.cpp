#include "doctest.h"

#include <cmath>

#include "bwrank/errors.hpp"
#include "bwrank/logmaps.hpp"
#include "bwrank/verify.hpp"
#include "helpers.hpp"

using bwrank::Matrix;
namespace lm = bwrank::logmaps;
namespace mk = bwrank::matkernels;
using bwrank::verify::random_orthogonal_from;

namespace {

// span(e1..ek) vs span(e1..e_{k-r}, e_{k+1}..e_{k+r}) under random mixing
void overlap_pair(bwrank::rng::Generator& g, std::size_t n, std::size_t k,
                  std::size_t r, Matrix& x, Matrix& y) {
  Matrix ex(n, k), ey(n, k);
  for (std::size_t j = 0; j < k; ++j) ex(j, j) = 1.0;
  for (std::size_t j = 0; j < k - r; ++j) ey(j, j) = 1.0;
  for (std::size_t j = 0; j < r; ++j) ey(k + j, k - r + j) = 1.0;
  Matrix m1 = bwrank::rng::normal_matrix(g, k, k);
  Matrix m2 = bwrank::rng::normal_matrix(g, k, k);
  while (mk::det_sign(m1) == 0) m1 = bwrank::rng::normal_matrix(g, k, k);
  while (mk::det_sign(m2) == 0) m2 = bwrank::rng::normal_matrix(g, k, k);
  x = bwrank::matmul(ex, m1);
  y = bwrank::matmul(ey, m2);
}

}  // namespace

TEST_CASE("log_rank: identical, partially orthogonal, fully orthogonal spans") {
  bwrank::rng::Generator g(3);
  const Matrix x = bwrank::rng::normal_matrix(g, 5, 2);
  const lm::LogRankResult same = lm::log_rank(x, x);
  CHECK(same.l == 2);
  CHECK(same.r == 0);

  // X = [e1 e2], Y = [e1 e3]: X^T Y = diag(1, 0), so l = 1, r = 1
  Matrix x12(3, 2), y13(3, 2);
  x12(0, 0) = x12(1, 1) = 1.0;
  y13(0, 0) = y13(2, 1) = 1.0;
  const lm::LogRankResult partial = lm::log_rank(x12, y13);
  CHECK(partial.l == 1);
  CHECK(partial.r == 1);
  CHECK(partial.angles[1] == doctest::Approx(std::acos(0.0)).epsilon(1e-12));

  Matrix xa(4, 2), yb(4, 2);
  xa(0, 0) = xa(1, 1) = 1.0;
  yb(2, 0) = yb(3, 1) = 1.0;
  const lm::LogRankResult ortho = lm::log_rank(xa, yb);
  CHECK(ortho.l == 0);
  CHECK(ortho.r == 2);

  Matrix deficient(5, 2);
  deficient(0, 0) = 1.0;
  CHECK_THROWS_AS(lm::log_rank(deficient, x), bwrank::RankError);
}

TEST_CASE("log_index_params: reconstruction invariant and thresholds") {
  bwrank::rng::Generator g(5);
  const Matrix q = bwrank::verify::random_stiefel(g, 6, 3);
  const lm::LogIndexParams same = lm::log_index_params(q, q);
  CHECK(same.l == 3);
  CHECK(same.r == 0);
  for (double s : same.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  Matrix x, y;
  overlap_pair(g, 7, 3, 2, x, y);
  const lm::LogIndexParams p = lm::log_index_params(x, y);
  CHECK(p.l == 1);
  CHECK(p.r == 2);
  Matrix us = p.u;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) us(i, j) *= p.sigma[j];
  CHECK(bwrank::frob_norm(bwrank::matmul_nt(us, p.v) - p.gram) <=
        1e-10 * std::max(1.0, bwrank::frob_norm(p.gram)));
  CHECK(p.sigma[1] <= mk::kRankTol * p.sigma[0]);
}

TEST_CASE("build_log_rotation: unique case r = 0") {
  bwrank::rng::Generator g(7);
  const Matrix x = bwrank::rng::normal_matrix(g, 5, 3);
  const Matrix y = bwrank::rng::normal_matrix(g, 5, 3);
  const lm::LogIndexParams p = lm::log_index_params(x, y);
  REQUIRE(p.r == 0);
  const Matrix rot = lm::build_log_rotation(p, Matrix(0, 0));
  CHECK(testutil::ortho_residual(rot) < 1e-12);
  CHECK(testutil::max_diff(rot, bwrank::matmul_nt(p.v, p.u)) < 1e-14);
  // certificate residual stays far below the acceptance threshold
  const Matrix lhs = bwrank::matmul(p.gram, rot);
  const Matrix rhs =
      mk::psd_sqrt(mk::SymMatrix(bwrank::matmul_nt(p.gram, p.gram))).entries();
  CHECK(bwrank::frob_norm(lhs - rhs) <= 1e-10);
}

TEST_CASE("build_log_rotation: two branches for r = 1, free block for r = k") {
  Matrix x12(3, 2), y13(3, 2);
  x12(0, 0) = x12(1, 1) = 1.0;
  y13(0, 0) = y13(2, 1) = 1.0;
  const lm::LogIndexParams p = lm::log_index_params(x12, y13);
  REQUIRE(p.r == 1);
  Matrix plus(1, 1), minus(1, 1);
  plus(0, 0) = 1.0;
  minus(0, 0) = -1.0;
  const Matrix r_plus = lm::build_log_rotation(p, plus);
  const Matrix r_minus = lm::build_log_rotation(p, minus);
  CHECK(bwrank::frob_norm(r_plus - r_minus) > 1e-6);
  CHECK(testutil::ortho_residual(r_plus) < 1e-12);
  CHECK(testutil::ortho_residual(r_minus) < 1e-12);

  // fully orthogonal spans: X^T Y = 0 and the certificate is 0 = 0
  bwrank::rng::Generator g(11);
  Matrix xa(5, 2), yb(5, 2);
  xa(0, 0) = xa(1, 1) = 1.0;
  yb(2, 0) = yb(3, 1) = 1.0;
  const lm::LogIndexParams pfree = lm::log_index_params(xa, yb);
  REQUIRE(pfree.r == 2);
  CHECK_NOTHROW(lm::build_log_rotation(pfree, random_orthogonal_from(g, 2)));

  Matrix not_orthogonal(1, 1);
  not_orthogonal(0, 0) = 2.0;
  CHECK_THROWS_AS(lm::build_log_rotation(p, not_orthogonal), std::invalid_argument);
  CHECK_THROWS_AS(lm::build_log_rotation(p, Matrix(2, 2)), bwrank::DimensionError);
}

TEST_CASE("sample_log_family: singleton, sign pair, and distinct O(2) draws") {
  bwrank::rng::Generator g(13);
  const Matrix x = bwrank::rng::normal_matrix(g, 6, 3);
  const Matrix y = bwrank::rng::normal_matrix(g, 6, 3);
  const lm::LogIndexParams unique = lm::log_index_params(x, y);
  REQUIRE(unique.r == 0);
  CHECK(lm::sample_log_family(unique, {1, 2, 3}).size() == 1);

  Matrix x12(3, 2), y13(3, 2);
  x12(0, 0) = x12(1, 1) = 1.0;
  y13(0, 0) = y13(2, 1) = 1.0;
  const lm::LogIndexParams two = lm::log_index_params(x12, y13);
  const auto branches = lm::sample_log_family(two, {1, 2, 3, 4, 5});
  CHECK(branches.size() == 2);  // O(1) = {+1, -1}, duplicates collapse

  Matrix xr, yr;
  overlap_pair(g, 8, 3, 2, xr, yr);
  const lm::LogIndexParams p2 = lm::log_index_params(xr, yr);
  REQUIRE(p2.r == 2);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(100 + s);
  const auto family = lm::sample_log_family(p2, seeds);
  CHECK(family.size() == 20);
  for (std::size_t i = 0; i < family.size(); ++i) {
    CHECK(testutil::ortho_residual(family[i]) < 1e-10);
    for (std::size_t j = i + 1; j < family.size(); ++j)
      CHECK(bwrank::frob_norm(family[i] - family[j]) > 1e-6);
    // round trip through the lower-right block
    const Matrix rr = lm::extract_rr(p2, family[i]);
    CHECK(bwrank::frob_norm(lm::build_log_rotation(p2, rr) - family[i]) < 1e-9);
  }
}

TEST_CASE("multiplicity count is consistent with the principal angles") {
  bwrank::rng::Generator g(17);
  for (std::size_t r = 0; r <= 2; ++r) {
    Matrix x, y;
    overlap_pair(g, 7, 3, r, x, y);
    const lm::LogRankResult lr = lm::log_rank(x, y);
    CHECK(lr.r == r);
    CHECK(bwrank::manifolds::orthogonal_count(lr.angles) == r);
  }
}
