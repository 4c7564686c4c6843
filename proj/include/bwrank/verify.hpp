#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwrank/manifolds.hpp"
#include "bwrank/matrix.hpp"
#include "bwrank/random.hpp"

namespace bwrank::verify {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 0;
  int trials = 10;
  double dt = 1e-3;
};

/// Runs every module's invariant suite on randomized inputs. trials == 0
/// returns an empty list (vacuous pass).
std::vector<CheckResult> run_all(const Options& opt);

// --- randomized draws shared with the test suites ----------------------

Matrix random_sym(rng::Generator& g, std::size_t k, double norm);
Matrix random_skew(rng::Generator& g, std::size_t k, double norm);
Matrix random_spd(rng::Generator& g, std::size_t k, double eig_lo, double eig_hi);
Matrix random_orthogonal_from(rng::Generator& g, std::size_t k);
Matrix random_stiefel(rng::Generator& g, std::size_t n, std::size_t k);
manifolds::BundlePoint random_bundle_point(rng::Generator& g, std::size_t n,
                                           std::size_t k, double eig_lo = 0.6,
                                           double eig_hi = 1.8);

}  // namespace bwrank::verify
