#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "bwrank/matrix.hpp"

namespace bwrank::rng {

/// Deterministic generator. Normals come from a hand-rolled Box-Muller on
/// top of mt19937_64 so streams do not depend on the standard library's
/// distribution implementations.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Independent substream, for splitting one seed across checks.
  Generator fork() { return Generator(eng_() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Matrix normal_matrix(Generator& g, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = g.normal();
  return m;
}

}  // namespace bwrank::rng
