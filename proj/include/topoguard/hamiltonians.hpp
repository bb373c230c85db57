#pragma once

#include <cstdint>
#include <vector>

#include "topoguard/pauli.hpp"

namespace topoguard {

struct CouplingParams {
  double jx = 1.0;
  double jy = 1.0;

  void validate() const {
    if (jx < 0 || jy < 0 || (jx == 0 && jy == 0))
      throw InvalidOperator("couplings must be >= 0 and not both zero");
  }
};

/// Static per-site noise amplitudes (b^x, b^y, b^z), units of J.
struct NoiseField {
  int n = 0;
  std::vector<double> b;  // n*n*3, layout [site*3 + axis]

  explicit NoiseField(int linear_size)
      : n(linear_size), b(static_cast<std::size_t>(n) * n * 3, 0.0) {}
  double& at(int site, int axis) { return b[site * 3 + axis]; }
  double at(int site, int axis) const { return b[site * 3 + axis]; }
};

enum class Boundary { OPEN, PERIODIC };

/// Long-range model: H = -Jx sum_i (sum_j sx_ij)^2 - Jy sum_j (sum_i sy_ij)^2,
/// expanded to -(Jx+Jy) n^2 * I  - 2Jx sx sx (intra-row pairs)
///                              - 2Jy sy sy (intra-column pairs).
OperatorSum build_lri(const Lattice& lat, const CouplingParams& params);

/// Nearest-neighbor comparison model:
/// H = -normalization * [ Jx sum sx_{i,j} sx_{i,j+1} + Jy sum sy_{i,j} sy_{i+1,j} ].
OperatorSum build_sri(const Lattice& lat, const CouplingParams& params,
                      Boundary boundary = Boundary::OPEN,
                      double normalization = 1.0);

/// H_ext = -sign * strength * sum sx_ij  (sign=+1 favors |+x>^(n^2)).
OperatorSum build_external_field(const Lattice& lat, int sign, double strength);

/// Local noise operator sum_ij (b^x sx + b^y sy + b^z sz)_ij.
OperatorSum build_noise(const Lattice& lat, const NoiseField& field);

/// i.i.d. uniform field on (-b_max, b_max), deterministic per seed.
NoiseField sample_noise(const Lattice& lat, double b_max, std::uint64_t seed);

}  // namespace topoguard
