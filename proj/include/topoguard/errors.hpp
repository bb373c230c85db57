#pragma once

#include <stdexcept>
#include <string>

namespace topoguard {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidLattice : Error {
  using Error::Error;
};
struct InvalidOperator : Error {
  using Error::Error;
};
struct BasisMismatch : Error {
  using Error::Error;
};
struct SymmetryMismatch : Error {
  using Error::Error;
};
struct AlgebraViolation : Error {
  using Error::Error;
};
struct DimensionExceeded : Error {
  using Error::Error;
};
struct UnstableConfiguration : Error {
  using Error::Error;
};
struct IntegrationFailure : Error {
  using Error::Error;
};

struct NotConverged : Error {
  double best_residual;
  explicit NotConverged(const std::string& msg, double residual)
      : Error(msg), best_residual(residual) {}
};

}  // namespace topoguard
