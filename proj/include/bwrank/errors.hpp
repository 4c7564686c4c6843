#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bwrank {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A matrix required to be (semi)definite has an eigenvalue below the
/// admissible floor. Carries the offending eigenvalue.
struct NotPositiveDefinite : std::domain_error {
  NotPositiveDefinite(const std::string& what, double eig)
      : std::domain_error(what), min_eigenvalue(eig) {}
  double min_eigenvalue;
};

/// Numerical rank differs from the requested one.
struct RankError : std::domain_error {
  RankError(const std::string& what, std::size_t expected_, std::size_t computed_)
      : std::domain_error(what), expected(expected_), computed(computed_) {}
  std::size_t expected;
  std::size_t computed;
};

/// A vector fails a tangency precondition.
struct TangencyError : std::domain_error {
  TangencyError(const std::string& what, double residual_)
      : std::domain_error(what), residual(residual_) {}
  double residual;
};

/// Geodesic ODE integration left the admissible domain.
struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
  double time;
};

/// A closed-form geodesic was evaluated outside its existence interval.
struct GeodesicDomainError : std::domain_error {
  GeodesicDomainError(const std::string& what, double t_admissible_)
      : std::domain_error(what), t_admissible(t_admissible_) {}
  double t_admissible;
};

/// A logarithm-rotation certificate did not hold.
struct CertificateError : std::runtime_error {
  CertificateError(const std::string& what, double residual_)
      : std::runtime_error(what), residual(residual_) {}
  double residual;
};

}  // namespace bwrank
