#include <doctest.h>

#include <cmath>

#include "topoguard/phonons.hpp"

using namespace topoguard;

TEST_CASE("two- and three-ion equilibria are the textbook values") {
  const auto u2 = chain_equilibrium(2);
  CHECK(u2[1] == doctest::Approx(std::cbrt(0.25)).epsilon(1e-10));
  CHECK(u2[0] == doctest::Approx(-std::cbrt(0.25)).epsilon(1e-10));
  const auto u3 = chain_equilibrium(3);
  CHECK(u3[1] == doctest::Approx(0.0).scale(1).epsilon(1e-10));
  CHECK(u3[2] == doctest::Approx(std::cbrt(5.0 / 4.0)).epsilon(1e-10));
}

TEST_CASE("lowest axial modes are {1, sqrt3} nu for every chain length") {
  for (int n = 2; n <= 16; ++n) {
    const ChainModel m = chain_modes(n);
    CHECK(std::abs(m.mode_frequencies[0] - 1.0) < 1e-9);
    CHECK(std::abs(m.mode_frequencies[1] - std::sqrt(3.0)) < 1e-9);
  }
  // third axial mode of a 3-ion chain: omega^2 = 29/5
  const ChainModel m3 = chain_modes(3);
  CHECK(m3.mode_frequencies[2] * m3.mode_frequencies[2] ==
        doctest::Approx(5.8).epsilon(1e-10));
}

TEST_CASE("fixed-spacing trap frequency (frozen reference)") {
  const ChainGapResult r = chain_gap_fixed_spacing(4, 2e-6);
  CHECK(r.nu == doctest::Approx(2.87292616e6).epsilon(1e-6));
  CHECK(r.gap == doctest::Approx((std::sqrt(3.0) - 1.0) * r.nu).epsilon(1e-12));
}

TEST_CASE("gap shrinks roughly as the inverse square of the array size") {
  std::vector<ChainGapResult> sweep;
  for (int n = 4; n <= 16; ++n) sweep.push_back(chain_gap_fixed_spacing(n, 2e-6));
  const double alpha = chain_gap_scaling_exponent(sweep);
  CHECK(alpha > 1.5);
  CHECK(alpha < 2.5);
}

TEST_CASE("array modes: exact COM, stability, and a usable gap") {
  const ArrayModel m = array_modes(5, 2e-6, 1e7);
  CHECK(m.mode_frequencies.size() == 50);
  int at_com = 0;
  for (double f : m.mode_frequencies)
    if (std::abs(f - 1e7) < 1.0) ++at_com;
  CHECK(at_com >= 2);
  CHECK(m.gap > 0.0);
  // tight spacing turns the transverse branch unstable
  CHECK_THROWS_AS(array_modes(5, 1e-6, 1e7), UnstableConfiguration);
}
